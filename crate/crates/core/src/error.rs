use thiserror::Error;

/// Errors raised by the factorizations and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero matrix has no norm estimate")]
    ZeroMatrix,

    #[error("iteration did not converge after {iters} steps (last ell = {last_ell:e})")]
    NotConverged {
        iters: usize,
        last_ell: f64,
        ell_trace: Vec<f64>,
    },

    #[error("no eigenvalues or singular values in the requested part of the spectrum")]
    EmptySpectrum,

    #[error("unsupported shift plan: {0} QDWH iterations (only 2 or 3 are tabulated)")]
    UnsupportedPlan(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
