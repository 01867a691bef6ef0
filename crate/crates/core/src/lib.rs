//! QDWH-based polar decomposition and the partial-spectrum symmetric
//! eigensolver and truncated SVD built on it.
//!
//! The crate is organized bottom-up:
//!
//! * [`kernels`]: dense matrix type, Householder QR, Cholesky, Jacobi
//!   eigen/SVD solvers, norm and extremal-eigenvalue estimators, seeded
//!   Gaussian matrices.
//! * [`polar`]: dynamically weighted Halley iteration (QR- and
//!   Cholesky-based steps) and the polar decomposition driver.
//! * [`fullsolve`]: full-spectrum spectral divide-and-conquer baselines.
//! * [`partial`]: partial symmetric eigensolver and truncated SVD.
//! * [`matgen`]: synthetic test matrices, accuracy metrics and the flop model.

pub mod error;
pub mod fullsolve;
pub mod kernels;
pub mod matgen;
pub mod partial;
pub mod polar;

pub use error::{Error, Result};
pub use kernels::{DenseMatrix, Seed, MACHINE_EPS};
