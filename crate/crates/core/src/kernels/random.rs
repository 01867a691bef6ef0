//! Seeded Gaussian matrices.
//!
//! ChaCha8 is a counter-based stream cipher, so a seed plus a stream id fixes
//! the exact sequence on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::matrix::DenseMatrix;

/// Seed for every random draw in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Generator for one independent stream of this seed.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// `m x n` matrix of i.i.d. standard normal entries, filled column by column.
pub fn gaussian_matrix(m: usize, n: usize, seed: Seed) -> DenseMatrix {
    gaussian_matrix_stream(m, n, seed, 0)
}

pub(crate) fn gaussian_matrix_stream(m: usize, n: usize, seed: Seed, stream: u64) -> DenseMatrix {
    let mut rng = seed.rng(stream);
    let data: Vec<f64> = (0..m * n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DenseMatrix::from_col_major(m, n, data).expect("normal samples are finite")
}
