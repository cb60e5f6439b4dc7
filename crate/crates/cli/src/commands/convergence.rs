use serde::Serialize;
use sgs_sampling::SamplingContext;

use super::{ModelSummary, OptF, F};
use crate::output::{csv_file, json_file, num, opt_num, Outputs};
use crate::setup::Setup;
use crate::stats::{fit_line, median};
use crate::trials::{run_trials, TrialRecord};
use crate::CliError;

/// Medians over the trials at one reconstruction dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub median_err_l2: F,
    pub median_err_legendre: OptF,
    pub median_k_factor: F,
    pub full_rank: usize,
    pub bound_ok: usize,
    pub tail_mass: F,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceOutcome {
    pub command: &'static str,
    pub model: ModelSummary,
    pub target: String,
    pub base_seed: u64,
    /// Error measure used for the fit: `err_legendre` for analytic targets,
    /// `err_l2` otherwise.
    pub fitted_on: &'static str,
    /// Slope of `ln(median error)` against `n`.
    pub slope: F,
    pub intercept: F,
    /// The same fit on the ambient-coordinate error `err_l2`.
    pub slope_err_l2: F,
    /// `−ln ρ` for targets with a finite Bernstein ellipse.
    pub theory_slope: OptF,
    pub points: Vec<ConvergencePoint>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

pub fn run(setup: &Setup) -> Result<ConvergenceOutcome, CliError> {
    let plan = &setup.plan;
    let target = setup.target();
    let mut points = Vec::new();
    let mut records = Vec::new();
    for (idx, &n) in plan.n.iter().enumerate() {
        let prof = setup.profile(n)?;
        let ctx = SamplingContext::new(&setup.model, &prof)?;
        let inputs = setup.bound_inputs(&prof, &ctx.coherence())?;
        let m = setup.sample_sizes(idx, &inputs)?[0];
        let recs = run_trials(&ctx, target, m, plan.trials, plan.base_seed)?;
        let legendre: Option<Vec<f64>> = recs.iter().map(|r| r.err_legendre).collect();
        points.push(ConvergencePoint {
            n,
            m,
            trials: recs.len(),
            median_err_l2: F(median(&recs.iter().map(|r| r.err_l2).collect::<Vec<_>>())),
            median_err_legendre: OptF(legendre.map(|v| median(&v))),
            median_k_factor: F(median(&recs.iter().map(|r| r.k_factor).collect::<Vec<_>>())),
            full_rank: recs.iter().filter(|r| r.full_rank).count(),
            bound_ok: recs.iter().filter(|r| r.bound_ok).count(),
            tail_mass: F(prof.tail_mass),
        });
        records.extend(recs);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ln = |v: f64| if v > 0.0 { v.ln() } else { f64::NAN };
    let analytic = points.iter().all(|p| p.median_err_legendre.0.is_some());
    let primary: Vec<f64> = points
        .iter()
        .map(|p| ln(if analytic { p.median_err_legendre.0.unwrap() } else { p.median_err_l2.0 }))
        .collect();
    let ambient: Vec<f64> = points.iter().map(|p| ln(p.median_err_l2.0)).collect();
    let (slope, intercept) = fit_line(&xs, &primary);
    let (slope_err_l2, _) = fit_line(&xs, &ambient);
    Ok(ConvergenceOutcome {
        command: "convergence",
        model: ModelSummary::of(setup),
        target: target.label.clone(),
        base_seed: plan.base_seed,
        fitted_on: if analytic { "err_legendre" } else { "err_l2" },
        slope: F(slope),
        intercept: F(intercept),
        slope_err_l2: F(slope_err_l2),
        theory_slope: OptF(target.rho().filter(|r| r.is_finite()).map(|r| -r.ln())),
        points,
        records,
    })
}

impl ConvergenceOutcome {
    pub fn outputs(&self) -> Result<Outputs, CliError> {
        let rows: Vec<Vec<String>> = self
            .points
            .iter()
            .map(|p| {
                vec![
                    p.n.to_string(),
                    p.m.to_string(),
                    p.trials.to_string(),
                    num(p.median_err_l2.0),
                    opt_num(p.median_err_legendre.0),
                    num(p.median_k_factor.0),
                    p.full_rank.to_string(),
                    p.bound_ok.to_string(),
                    num(p.tail_mass.0),
                ]
            })
            .collect();
        let trial_rows: Vec<Vec<String>> = self.records.iter().map(TrialRecord::row).collect();
        Ok(Outputs {
            files: vec![
                csv_file(
                    "convergence.csv",
                    &["n", "m", "trials", "median_err_l2", "median_err_legendre", "median_k_factor", "full_rank", "bound_ok", "tail_mass"],
                    &rows,
                )?,
                csv_file("trials.csv", &TrialRecord::HEADER, &trial_rows)?,
                json_file("summary.json", self)?,
            ],
            headline: format!(
                "convergence: fitted slope {} on {} (theory {})",
                num(self.slope.0),
                self.fitted_on,
                opt_num(self.theory_slope.0)
            ),
        })
    }
}
