use serde::Serialize;
use sgs_fourier_legendre::frequency_at;

use super::{ModelSummary, F};
use crate::output::{csv_file, json_file, num, Outputs};
use crate::setup::Setup;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct LeverageRow {
    /// 1-based sampling index.
    pub index: usize,
    /// Fourier frequency `σ(index)` on Fourier–Legendre models.
    pub sigma: Option<i64>,
    pub leverage: f64,
    pub p: f64,
    /// Running sum of `p`; ends at 1.
    pub cumulative_p: f64,
    /// Running sum of `p·(1 − tail_mass)`; ends at `1 − tail_mass`.
    pub cumulative_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeverageOutcome {
    pub command: &'static str,
    pub model: ModelSummary,
    pub n: usize,
    pub trace_sigma: F,
    pub tail_mass: F,
    pub sum_p: F,
    pub lambda0: F,
    pub sigma_rank: usize,
    pub distribution_id: String,
    #[serde(skip)]
    pub rows: Vec<LeverageRow>,
}

pub fn run(setup: &Setup) -> Result<LeverageOutcome, CliError> {
    let n = setup.plan.n[0];
    let prof = setup.profile(n)?;
    let kept = 1.0 - prof.tail_mass;
    let mut cum = 0.0;
    let rows = prof
        .p
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            cum += p;
            LeverageRow {
                index: j + 1,
                sigma: setup.fl.as_ref().map(|_| frequency_at(j)),
                leverage: prof.leverage(j),
                p,
                cumulative_p: cum,
                cumulative_mass: cum * kept,
            }
        })
        .collect();
    Ok(LeverageOutcome {
        command: "leverage",
        model: ModelSummary::of(setup),
        n,
        trace_sigma: F(prof.trace_sigma),
        tail_mass: F(prof.tail_mass),
        sum_p: F(prof.p.iter().sum()),
        lambda0: F(prof.lambda0),
        sigma_rank: prof.sigma_rank,
        distribution_id: prof.distribution_id.clone(),
        rows,
    })
}

impl LeverageOutcome {
    pub fn outputs(&self) -> Result<Outputs, CliError> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.index.to_string(),
                    r.sigma.map(|s| s.to_string()).unwrap_or_default(),
                    num(r.leverage),
                    num(r.p),
                    num(r.cumulative_p),
                    num(r.cumulative_mass),
                ]
            })
            .collect();
        Ok(Outputs {
            files: vec![
                csv_file("leverage.csv", &["index", "sigma", "leverage", "p", "cumulative_p", "cumulative_mass"], &rows)?,
                json_file("leverage.json", self)?,
            ],
            headline: format!(
                "leverage: n={} rows={} tail_mass={}",
                self.n,
                self.rows.len(),
                num(self.tail_mass.0)
            ),
        })
    }
}
