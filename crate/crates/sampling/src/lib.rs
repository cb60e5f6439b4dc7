//! Stochastic generalized sampling.
//!
//! A [`FrameModel`] holds a sampling system `{s_j}` and a reconstruction
//! system `{w_k}` in coordinates of an ambient orthonormal basis. Sample
//! indices are drawn i.i.d. from a distribution `p`, and the element is
//! recovered in the span of the first `n` reconstruction vectors by weighted
//! least squares.
//!
//! Indices are 0-based in the Rust API and 1-based in serialized output.

mod context;
mod draw;
mod model;
mod profile;
mod report;

pub use context::{
    empirical_cross_term, empirical_gram, range_stability_check, reconstruct, RangeCheck,
    SamplingContext, TrialDiagnostics,
};
pub use draw::{draw_samples, SampleDraw};
pub use model::{build_frame_model, DeclaredBounds, FrameModel, KindFlags};
pub use profile::{
    christoffel_profile, coherence_profile, leverage_profile, ChristoffelEntry,
    ChristoffelProfile, CoherenceProfile, LeverageProfile, PSpec,
};
pub use report::{GramCondition, ReconstructionReport};

use sgs_linalg::LinalgError;
use thiserror::Error;

/// `‖v_j‖` at or below this is treated as zero when checking the support
/// condition on `p`.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Projector distance below which two ranges are reported equal.
pub const RANGE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("sampling and reconstruction systems have {s_rows} and {w_rows} ambient rows")]
    RowMismatch { s_rows: usize, w_rows: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("reconstruction dimension n = {n} must lie in 1..={k}")]
    InvalidN { n: usize, k: usize },
    #[error("p vanishes at index {index} (1-based) where ‖v_j‖ = {norm:.3e} > 0")]
    SupportViolation { index: usize, norm: f64 },
    #[error("tr(Σ) = 0: the sampling system does not see the reconstruction space")]
    DegenerateModel,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("draw does not match the profile: {0}")]
    DrawMismatch(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, SamplingError>;
