//! Fourier samples, Legendre reconstructions.
//!
//! Functions on `[−1, 1]` are sampled through their 2-periodic Fourier
//! coefficients `(1/√2)∫ f(x) e^{−iπℓx} dx` and reconstructed in the span of
//! normalized Legendre polynomials. The Fourier coefficients of Legendre
//! polynomials are spherical Bessel values, which gives the leverage
//! distribution in closed form.

mod bessel;
mod distribution;
mod freq;
mod legendre;
mod model;
pub mod quad;
mod target;

pub use bessel::{spherical_bessel_at_pi_multiple, spherical_bessel_seq};
pub use distribution::{
    fl_leverage_distribution, fl_leverage_scores, fl_truncation_for_tail, FlTruncation,
    DEFAULT_MAX_TAIL,
};
pub use freq::{frequency_at, position_of, FrequencyMap};
pub use legendre::{legendre_eval, legendre_fourier_coef, legendre_fourier_column};
pub use model::{build_fl_model, build_fl_model_with_tolerance, l2_error, FlModel, DEFAULT_MAX_DEFECT};
pub use target::{legendre_q, target_coefficients, AnalyticTarget, TargetCoefficients};

use sgs_linalg::LinalgError;
use sgs_sampling::SamplingError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("J = {j} retains too little leverage for n = {n} (tail mass {tail_mass:.3e}); increase J")]
    InsufficientTruncation { n: usize, j: usize, tail_mass: f64 },
    #[error("ambient dimension {ambient} leaves a column defect of {defect:.3e}, above {tolerance:.1e}")]
    AmbientTooSmall { ambient: usize, defect: f64, tolerance: f64 },
    #[error("quadrature did not converge at {nodes} nodes (disagreement {disagreement:.3e})")]
    Quadrature { nodes: usize, disagreement: f64 },
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, FlError>;
