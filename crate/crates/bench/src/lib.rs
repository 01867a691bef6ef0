//! Seeded inputs shared by the criterion benches.

use qdwh_core::kernels::gaussian_matrix;
use qdwh_core::matgen::{gen_conditioned, gen_svd_test, gen_sym_eig_test};
use qdwh_core::{DenseMatrix, Seed};

pub const SIZES: [usize; 3] = [64, 128, 256];

/// Symmetric with `round(0.1 n)` negative eigenvalues.
pub fn eig_input(n: usize) -> DenseMatrix {
    let k = ((0.1 * n as f64).round() as usize).max(1);
    gen_sym_eig_test(n, k, Seed(1))
        .expect("valid generator input")
        .0
}

/// Geometric singular values.
pub fn svd_input(n: usize) -> DenseMatrix {
    gen_svd_test(n, Seed(2)).expect("valid generator input").0
}

pub fn conditioned_input(n: usize, kappa: f64) -> DenseMatrix {
    gen_conditioned(n, n, kappa, Seed(3))
        .expect("valid generator input")
        .0
}

pub fn gaussian_input(n: usize) -> DenseMatrix {
    gaussian_matrix(n, n, Seed(4))
}
