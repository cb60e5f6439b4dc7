use serde::Serialize;
use sgs_bounds::{crossterm_sample_size, gram_sample_size, kfactor_sample_size, BoundInputs, GramMode, KVariant};
use sgs_sampling::SamplingContext;

use super::{ModelSummary, OptF, Threshold, F};
use crate::output::{json_file, Outputs};
use crate::setup::Setup;
use crate::CliError;

/// Bound inputs as echoed in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputsEcho {
    pub n: usize,
    pub delta: F,
    pub epsilon: OptF,
    #[serde(rename = "R")]
    pub r: OptF,
    #[serde(rename = "R_prime")]
    pub r_prime: OptF,
    #[serde(rename = "R_double")]
    pub r_double: OptF,
    #[serde(rename = "K")]
    pub k_scale: OptF,
    pub sigma_norm: OptF,
    pub sigma_inv_norm: OptF,
    pub trace_sigma: OptF,
    pub lambda0: OptF,
    #[serde(rename = "Lambda")]
    pub lambda: OptF,
    #[serde(rename = "D")]
    pub d_riesz_upper: OptF,
}

impl From<&BoundInputs> for InputsEcho {
    fn from(b: &BoundInputs) -> Self {
        InputsEcho {
            n: b.n,
            delta: F(b.delta),
            epsilon: OptF(b.epsilon),
            r: OptF(b.r),
            r_prime: OptF(b.r_prime),
            r_double: OptF(b.r_double),
            k_scale: OptF(b.k_scale),
            sigma_norm: OptF(b.sigma_norm),
            sigma_inv_norm: OptF(b.sigma_inv_norm),
            trace_sigma: OptF(b.trace_sigma),
            lambda0: OptF(b.lambda0),
            lambda: OptF(b.lambda),
            d_riesz_upper: OptF(b.d_riesz_upper),
        }
    }
}

/// Every sample-size threshold; entries that cannot be evaluated carry the
/// reason instead of a value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllThresholds {
    /// `M_{ε,δ}`.
    pub gram_explicit_eps: Threshold,
    /// `M_δ`.
    pub gram_at_lambda0: Threshold,
    pub rate_rlogn: Threshold,
    pub rate_leverage: Threshold,
    pub rate_onb: Threshold,
    /// `M̃_{ε,δ}`.
    pub crossterm: Threshold,
    /// `M*` for Riesz and frame reconstruction systems.
    pub kfactor_riesz: Threshold,
    pub kfactor_frames: Threshold,
}

impl AllThresholds {
    pub fn evaluate(inp: &BoundInputs) -> Self {
        AllThresholds {
            gram_explicit_eps: gram_sample_size(inp, GramMode::ExplicitEps).into(),
            gram_at_lambda0: gram_sample_size(inp, GramMode::AtLambda0).into(),
            rate_rlogn: gram_sample_size(inp, GramMode::RateRlogn).into(),
            rate_leverage: gram_sample_size(inp, GramMode::RateLeverage).into(),
            rate_onb: gram_sample_size(inp, GramMode::RateOnb).into(),
            crossterm: crossterm_sample_size(inp).into(),
            kfactor_riesz: kfactor_sample_size(inp, KVariant::Riesz).into(),
            kfactor_frames: kfactor_sample_size(inp, KVariant::Frames).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsOutcome {
    pub command: &'static str,
    pub model: ModelSummary,
    pub inputs: InputsEcho,
    pub thresholds: AllThresholds,
}

pub fn run(setup: &Setup) -> Result<BoundsOutcome, CliError> {
    let n = setup.plan.n[0];
    let prof = setup.profile(n)?;
    let ctx = SamplingContext::new(&setup.model, &prof)?;
    let inputs = setup.bound_inputs(&prof, &ctx.coherence())?;
    Ok(BoundsOutcome {
        command: "bounds",
        model: ModelSummary::of(setup),
        inputs: (&inputs).into(),
        thresholds: AllThresholds::evaluate(&inputs),
    })
}

impl BoundsOutcome {
    pub fn outputs(&self) -> Result<Outputs, CliError> {
        let t = &self.thresholds;
        let show = |x: &Threshold| x.value.map_or("n/a".to_string(), |v| v.to_string());
        Ok(Outputs {
            files: vec![json_file("bounds.json", self)?],
            headline: format!(
                "bounds: rate_onb={} M_eps={} M_delta={} crossterm={} kfactor_riesz={}",
                show(&t.rate_onb),
                show(&t.gram_explicit_eps),
                show(&t.gram_at_lambda0),
                show(&t.crossterm),
                show(&t.kfactor_riesz)
            ),
        })
    }
}
