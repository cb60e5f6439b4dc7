use serde::Serialize;
use sgs_bounds::{crossterm_sample_size, gram_sample_size, BoundInputs, GramMode};
use sgs_sampling::{CoherenceProfile, SamplingContext};

use super::{ModelSummary, Threshold, F};
use crate::config::CommandKind;
use crate::output::{csv_file, json_file, num, Outputs};
use crate::setup::Setup;
use crate::stats::{median, Proportion};
use crate::trials::{run_trials, TrialRecord};
use crate::CliError;

/// Sample-size thresholds at the run's `ε` and `δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McThresholds {
    /// `M_{ε,δ}`.
    pub gram_explicit_eps: Threshold,
    /// `M_δ`, the invertibility threshold at `ε = λ₀`.
    pub gram_at_lambda0: Threshold,
    pub rate_onb: Threshold,
    /// `M̃_{ε,δ}`.
    pub crossterm: Threshold,
}

/// Statistics over the trials at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub m: usize,
    pub trials: usize,
    /// Trials with `‖Σ̂_Ω − Σ‖ ≥ ε`.
    pub gram_exceed: Proportion,
    /// Trials with `‖Ĉ_Ω − C‖ ≥ ε`.
    pub cross_exceed: Proportion,
    pub invertible: Proportion,
    pub range_stable: Proportion,
    /// Trials where the error bound is guaranteed (full rank or stable
    /// range), and how many of those violate it.
    pub bound_checked: usize,
    pub bound_violations: usize,
    pub median_gram_dev: F,
    pub median_cross_dev: F,
    pub median_k_factor: F,
    pub median_err_l2: F,
    /// Whether the event frequency of this command stays within `δ`.
    pub within_delta: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct McOutcome {
    pub command: &'static str,
    pub model: ModelSummary,
    pub target: String,
    pub n: usize,
    pub base_seed: u64,
    pub delta: F,
    pub epsilon: F,
    pub lambda0: F,
    pub tail_mass: F,
    pub scalars: CoherenceProfile,
    pub thresholds: McThresholds,
    pub summaries: Vec<McSummary>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

pub fn run(setup: &Setup) -> Result<McOutcome, CliError> {
    let plan = &setup.plan;
    let n = plan.n[0];
    let prof = setup.profile(n)?;
    let ctx = SamplingContext::new(&setup.model, &prof)?;
    let coh = ctx.coherence();
    let inputs = setup.bound_inputs(&prof, &coh)?;
    let ms = setup.sample_sizes(0, &inputs)?;
    let eps = setup.epsilon(&prof);
    let target = setup.target();
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for &m in &ms {
        let recs = run_trials(&ctx, target, m, plan.trials, plan.base_seed)?;
        summaries.push(summarize(plan.command, m, eps, plan.delta, &recs));
        records.extend(recs);
    }
    Ok(McOutcome {
        command: plan.command.name(),
        model: ModelSummary::of(setup),
        target: target.label.clone(),
        n,
        base_seed: plan.base_seed,
        delta: F(plan.delta),
        epsilon: F(eps),
        lambda0: F(prof.lambda0),
        tail_mass: F(prof.tail_mass),
        scalars: coh,
        thresholds: thresholds(&inputs),
        summaries,
        records,
    })
}

fn thresholds(inputs: &BoundInputs) -> McThresholds {
    McThresholds {
        gram_explicit_eps: gram_sample_size(inputs, GramMode::ExplicitEps).into(),
        gram_at_lambda0: gram_sample_size(inputs, GramMode::AtLambda0).into(),
        rate_onb: gram_sample_size(inputs, GramMode::RateOnb).into(),
        crossterm: crossterm_sample_size(inputs).into(),
    }
}

pub fn summarize(command: CommandKind, m: usize, eps: f64, delta: f64, recs: &[TrialRecord]) -> McSummary {
    let col = |f: fn(&TrialRecord) -> f64| recs.iter().map(f).collect::<Vec<_>>();
    let gram_exceed = Proportion::of(recs, |r| r.gram_dev >= eps);
    let cross_exceed = Proportion::of(recs, |r| r.cross_dev >= eps);
    let event = if command == CommandKind::McCrossterm { cross_exceed } else { gram_exceed };
    McSummary {
        m,
        trials: recs.len(),
        gram_exceed,
        cross_exceed,
        invertible: Proportion::of(recs, |r| r.full_rank),
        range_stable: Proportion::of(recs, |r| r.range_stable),
        bound_checked: recs.iter().filter(|r| r.bound_applies()).count(),
        bound_violations: recs.iter().filter(|r| r.bound_applies() && !r.bound_ok).count(),
        median_gram_dev: F(median(&col(|r| r.gram_dev))),
        median_cross_dev: F(median(&col(|r| r.cross_dev))),
        median_k_factor: F(median(&col(|r| r.k_factor))),
        median_err_l2: F(median(&col(|r| r.err_l2))),
        within_delta: event.freq <= delta,
    }
}

impl McOutcome {
    pub fn outputs(&self) -> Result<Outputs, CliError> {
        let rows: Vec<Vec<String>> = self.records.iter().map(TrialRecord::row).collect();
        let s = self.summaries.last().expect("at least one sample size");
        let event = if self.command == "mc-crossterm" { &s.cross_exceed } else { &s.gram_exceed };
        Ok(Outputs {
            files: vec![
                csv_file("trials.csv", &TrialRecord::HEADER, &rows)?,
                json_file("summary.json", self)?,
            ],
            headline: format!(
                "{}: n={} m={} trials={} event freq={} (Wilson 95% [{}, {}]) delta={}",
                self.command,
                self.n,
                s.m,
                s.trials,
                num(event.freq),
                num(event.wilson_lo),
                num(event.wilson_hi),
                num(self.delta.0)
            ),
        })
    }
}
