//! Dense complex linear algebra used throughout the sampling engine.
//!
//! Everything is built on a single SVD kernel so that norms, pseudo-inverses,
//! projectors and least-squares solves share one rank decision.

mod cmat;
mod decomp;
mod ops;
pub mod serial;

pub use cmat::{CMat, CVec};
pub use decomp::{
    default_rel_tol, minimal_norm_lsq, numerical_rank, operator_norm, orthonormal_basis,
    pseudo_inverse, rank_above, svd, SvdFactors,
};
pub use num_complex::Complex64;
pub use ops::{
    effective_rank, hermitian_dilation, is_projector, projector_from_columns, range_distance,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("empty matrix ({rows}x{cols}) where a nonempty one is required")]
    Empty { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("relative tolerance {0} must lie in (0, 1)")]
    Tolerance(f64),
    #[error("matrix is not Hermitian positive semidefinite (violation {0:.3e})")]
    NotPsd(f64),
    #[error("matrix is not an orthogonal projector (violation {0:.3e})")]
    NotProjector(f64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;
