pub mod bounds;
pub mod convergence;
pub mod leverage;
pub mod montecarlo;
pub mod reconstruct;

use serde::Serialize;
use sgs_bounds::BoundsError;
use sgs_linalg::serial::{ser_f64, ser_opt_f64};

use crate::config::ModelSpec;
use crate::setup::Setup;

/// Model description echoed into every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub kind: &'static str,
    pub ambient_dim: usize,
    pub num_samples: usize,
    pub num_recon: usize,
    pub sampling_is_orthonormal: bool,
    pub reconstruction_is_riesz: bool,
    /// Per-column truncation defects of Fourier–Legendre models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_defects: Option<Vec<F>>,
}

/// Serialization wrapper for reals in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct F(#[serde(serialize_with = "ser_f64")] pub f64);

/// Optional real serialized as a number or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct OptF(#[serde(serialize_with = "ser_opt_f64")] pub Option<f64>);

impl ModelSummary {
    pub fn of(setup: &Setup) -> Self {
        let m = &setup.model;
        ModelSummary {
            kind: match setup.plan.model {
                ModelSpec::Identity { .. } => "identity",
                ModelSpec::FourierLegendre { .. } => "fourier-legendre",
                ModelSpec::Custom { .. } => "custom",
            },
            ambient_dim: m.ambient_dim(),
            num_samples: m.num_samples(),
            num_recon: m.num_recon(),
            sampling_is_orthonormal: m.flags().sampling_is_orthonormal,
            reconstruction_is_riesz: m.flags().reconstruction_is_riesz,
            column_defects: setup.fl.as_ref().map(|f| f.column_defects.iter().map(|&d| F(d)).collect()),
        }
    }
}

/// A sample-size threshold, or the reason it could not be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub value: Option<u64>,
    pub error: Option<String>,
}

impl From<Result<u64, BoundsError>> for Threshold {
    fn from(r: Result<u64, BoundsError>) -> Self {
        match r {
            Ok(v) => Threshold { value: Some(v), error: None },
            Err(e) => Threshold { value: None, error: Some(e.to_string()) },
        }
    }
}
