use serde::Serialize;
use sgs_fourier_legendre::frequency_at;
use sgs_sampling::{draw_samples, ReconstructionReport, SampleDraw, SamplingContext};

use super::{ModelSummary, OptF, F};
use crate::output::{csv_file, json_file, num, Outputs};
use crate::setup::Setup;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructOutcome {
    pub command: &'static str,
    pub model: ModelSummary,
    pub target: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub tail_mass: F,
    pub lambda0: F,
    pub error_bound: F,
    /// True `L²` error through Legendre coordinates (analytic targets only).
    pub err_legendre: OptF,
    pub report: ReconstructionReport,
    pub draw: SampleDraw,
    #[serde(skip)]
    f: Vec<sgs_linalg::Complex64>,
    #[serde(skip)]
    fl: bool,
}

/// One draw of size `m` with seed `base_seed`, then a weighted
/// least-squares reconstruction.
pub fn run(setup: &Setup) -> Result<ReconstructOutcome, CliError> {
    let n = setup.plan.n[0];
    let prof = setup.profile(n)?;
    let ctx = SamplingContext::new(&setup.model, &prof)?;
    let inputs = setup.bound_inputs(&prof, &ctx.coherence())?;
    let m = setup.sample_sizes(0, &inputs)?[0];
    let seed = setup.plan.base_seed;
    let draw = draw_samples(&prof, m, seed)?;
    let target = setup.target();
    let report = ctx.reconstruct(&draw, &target.f)?;
    Ok(ReconstructOutcome {
        command: "reconstruct",
        model: ModelSummary::of(setup),
        target: target.label.clone(),
        n,
        m,
        seed,
        tail_mass: F(prof.tail_mass),
        lambda0: F(prof.lambda0),
        error_bound: F(report.error_bound()),
        err_legendre: OptF(target.legendre_error(&report.x_tilde)),
        report,
        draw,
        f: target.f.clone(),
        fl: setup.fl.is_some(),
    })
}

impl ReconstructOutcome {
    pub fn outputs(&self) -> Result<Outputs, CliError> {
        let coef_rows: Vec<Vec<String>> = self
            .report
            .x_tilde
            .iter()
            .enumerate()
            .map(|(k, z)| vec![(k + 1).to_string(), num(z.re), num(z.im)])
            .collect();
        let amb_rows: Vec<Vec<String>> = self
            .report
            .f_tilde_coef
            .iter()
            .zip(&self.f)
            .enumerate()
            .map(|(i, (g, f))| {
                let sigma = if self.fl { frequency_at(i).to_string() } else { String::new() };
                vec![(i + 1).to_string(), sigma, num(f.re), num(f.im), num(g.re), num(g.im)]
            })
            .collect();
        Ok(Outputs {
            files: vec![
                json_file("report.json", self)?,
                csv_file("coefficients.csv", &["k", "re", "im"], &coef_rows)?,
                csv_file("ambient.csv", &["index", "sigma", "f_re", "f_im", "f_tilde_re", "f_tilde_im"], &amb_rows)?,
            ],
            headline: format!(
                "reconstruct: n={} m={} err_l2={} bound={} bound_ok={}",
                self.n,
                self.m,
                num(self.report.err_l2),
                num(self.error_bound.0),
                self.report.bound_ok
            ),
        })
    }
}
