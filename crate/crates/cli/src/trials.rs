use rayon::prelude::*;
use serde::Serialize;
use sgs_linalg::serial::{ser_f64, ser_opt_f64};
use sgs_sampling::{draw_samples, SamplingContext};

use crate::output::{num, opt_num};
use crate::setup::Target;
use crate::CliError;

/// Quantities recorded for one random draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_f64")]
    pub err_l2: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tail_err: f64,
    #[serde(serialize_with = "ser_f64")]
    pub k_factor: f64,
    /// `‖Σ̂_Ω − Σ‖`.
    #[serde(serialize_with = "ser_f64")]
    pub gram_dev: f64,
    /// `‖Ĉ_Ω − C‖`.
    #[serde(serialize_with = "ser_f64")]
    pub cross_dev: f64,
    pub bound_ok: bool,
    pub full_rank: bool,
    pub range_stable: bool,
    /// True `L²` error through Legendre coordinates (analytic targets only).
    #[serde(serialize_with = "ser_opt_f64")]
    pub err_legendre: Option<f64>,
}

impl TrialRecord {
    pub const HEADER: [&'static str; 13] = [
        "trial_index",
        "seed",
        "m",
        "n",
        "err_l2",
        "tail_err",
        "k_factor",
        "gram_dev",
        "cross_dev",
        "bound_ok",
        "full_rank",
        "range_stable",
        "err_legendre",
    ];

    pub fn row(&self) -> Vec<String> {
        vec![
            self.trial_index.to_string(),
            self.seed.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            num(self.err_l2),
            num(self.tail_err),
            num(self.k_factor),
            num(self.gram_dev),
            num(self.cross_dev),
            self.bound_ok.to_string(),
            self.full_rank.to_string(),
            self.range_stable.to_string(),
            opt_num(self.err_legendre),
        ]
    }

    /// Whether the error bound is guaranteed for this draw.
    pub fn bound_applies(&self) -> bool {
        self.full_rank || self.range_stable
    }
}

/// Runs `trials` independent draws of size `m`; trial `t` uses seed
/// `base_seed + t`. Trials run in parallel and are returned in index order.
pub fn run_trials(
    ctx: &SamplingContext<'_>,
    target: &Target,
    m: usize,
    trials: usize,
    base_seed: u64,
) -> Result<Vec<TrialRecord>, CliError> {
    let n = ctx.profile().n;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = base_seed.wrapping_add(t as u64);
            let draw = draw_samples(ctx.profile(), m, seed)?;
            let (rep, diag) = ctx.reconstruct_with_diagnostics(&draw, &target.f)?;
            Ok(TrialRecord {
                trial_index: t,
                seed,
                m,
                n,
                err_l2: rep.err_l2,
                tail_err: rep.tail_err,
                k_factor: rep.k_factor,
                gram_dev: diag.gram_dev,
                cross_dev: diag.cross_dev,
                bound_ok: rep.bound_ok,
                full_rank: diag.full_rank,
                range_stable: diag.range.equal,
                err_legendre: target.legendre_error(&rep.x_tilde),
            })
        })
        .collect()
}
