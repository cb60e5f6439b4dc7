//! Matrix Bernstein tail bounds and the sample-size thresholds built on them.
//!
//! Logarithms are natural; ceilings are applied only to the final count.
//! Tail bounds are returned unclamped (they may exceed 1).

mod sizes;
mod tails;

pub use sizes::{
    crossterm_sample_size, gram_sample_size, kfactor_sample_size, BoundInputs, GramMode,
    KVariant,
};
pub use tails::{
    bernstein_matrix_tail, bernstein_operator_tail, bernstein_rectangular_tail,
    operator_validity_threshold,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("eps = {eps} is below the validity threshold {threshold}")]
    BelowValidity { eps: f64, threshold: f64 },
    #[error("both variance norms are zero; the rectangular bound is undefined")]
    DegenerateVariance,
    #[error("missing scalar `{0}` required by this threshold")]
    Missing(&'static str),
    #[error("epsilon = {eps} outside the admissible range {range}")]
    EpsilonRange { eps: f64, range: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;
