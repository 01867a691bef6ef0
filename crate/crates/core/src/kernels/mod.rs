//! Deterministic dense linear-algebra substrate.

pub mod cholesky;
pub mod eig;
pub mod estimate;
pub mod matrix;
pub mod qr;
pub mod random;
pub mod svd;

pub use cholesky::{cholesky, solve_upper_right, solve_upper_transpose_right};
pub use eig::{sym_eig_dense, SymEig};
pub use estimate::{lanczos_min_bound, two_norm_estimate, LANCZOS_DEFAULT_STEPS};
pub use matrix::DenseMatrix;
pub use qr::{qr_factor, qr_full_any, qr_thin, QrFactors};
pub use random::{gaussian_matrix, Seed};
pub use svd::{singular_values, svd_dense, Svd};

/// Machine epsilon `u ≈ 2.22e-16`, the scale of every convergence test.
pub const MACHINE_EPS: f64 = f64::EPSILON;
