//! Synthetic matrices with planted spectra.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kernels::random::gaussian_matrix_stream;
use crate::kernels::{qr_factor, DenseMatrix, Seed};

/// Stream of the magnitude draws, kept apart from the orthogonal factors.
const MAGNITUDE_STREAM: u64 = 7;

/// Random orthogonal `n × n` matrix: the `Q` factor of a Gaussian matrix.
pub fn random_orthogonal(n: usize, seed: Seed, stream: u64) -> Result<DenseMatrix> {
    Ok(qr_factor(&gaussian_matrix_stream(n, n, seed, stream))?.q)
}

/// `Q diag(d) Qᵀ`, symmetrized.
fn orthogonal_similarity(q: &DenseMatrix, d: &[f64]) -> DenseMatrix {
    let mut qd = q.clone();
    for (j, &dj) in d.iter().enumerate() {
        qd.col_mut(j).iter_mut().for_each(|v| *v *= dj);
    }
    qd.matmul_tr(q).symmetrized()
}

/// `U diag(s) Vᵀ` for `U` m×n and `V` n×n.
fn scaled_product(u: &DenseMatrix, s: &[f64], v: &DenseMatrix) -> DenseMatrix {
    let mut us = u.clone();
    for (j, &sj) in s.iter().enumerate() {
        us.col_mut(j).iter_mut().for_each(|x| *x *= sj);
    }
    us.matmul_tr(v)
}

/// Symmetric test matrix with exactly `k` negative eigenvalues.
///
/// Negative eigenvalues are `−k·mᵢ`, positive ones `n − k·mᵢ`, with
/// magnitudes `mᵢ = |z| + 0.1` for standard normal `z`. A positive-side
/// draw with `k·m ≥ n` is redrawn. Returns `A = QDQᵀ` and `D` sorted
/// ascending.
pub fn gen_sym_eig_test(n: usize, k: usize, seed: Seed) -> Result<(DenseMatrix, Vec<f64>)> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let mut rng = seed.rng(MAGNITUDE_STREAM);
    let mut magnitude = || {
        let z: f64 = StandardNormal.sample(&mut rng);
        z.abs() + 0.1
    };
    let (nf, kf) = (n as f64, k as f64);
    let mut d = Vec::with_capacity(n);
    for _ in 0..k {
        d.push(-kf * magnitude());
    }
    for _ in k..n {
        let m = loop {
            let m = magnitude();
            if kf * m < nf {
                break m;
            }
        };
        d.push(nf - kf * m);
    }
    let q = random_orthogonal(n, seed, 0)?;
    let a = orthogonal_similarity(&q, &d);
    d.sort_by(f64::total_cmp);
    Ok((a, d))
}

/// Geometric singular values `σᵢ = 0.5^(100 i / n)`, `i = 1..n`.
pub fn geometric_spectrum(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| 0.5f64.powf(100.0 * i as f64 / n as f64))
        .collect()
}

/// `A = Q₁ diag(σ) Q₂ᵀ` with the geometric spectrum and independent
/// orthogonal factors. `σ` is returned descending.
pub fn gen_svd_test(n: usize, seed: Seed) -> Result<(DenseMatrix, Vec<f64>)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let sigma = geometric_spectrum(n);
    let q1 = random_orthogonal(n, seed, 0)?;
    let q2 = random_orthogonal(n, seed, 1)?;
    Ok((scaled_product(&q1, &sigma, &q2), sigma))
}

/// `m × n` matrix (`m ≥ n`) with singular values log-spaced from 1 down to
/// `1/kappa`, returned descending.
pub fn gen_conditioned(
    m: usize,
    n: usize,
    kappa: f64,
    seed: Seed,
) -> Result<(DenseMatrix, Vec<f64>)> {
    if m < n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "need m >= n >= 1, got {m}x{n}"
        )));
    }
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be finite and >= 1, got {kappa}"
        )));
    }
    let sigma: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        (0..n)
            .map(|i| kappa.powf(-(i as f64) / (n - 1) as f64))
            .collect()
    };
    let u = random_orthogonal(m, seed, 0)?.columns(0..n);
    let v = random_orthogonal(n, seed, 1)?;
    Ok((scaled_product(&u, &sigma, &v), sigma))
}

/// Fraction of the geometric spectrum above `s·σ₁`: `log₂(1/s)/100`,
/// capped at one.
pub fn expected_fraction(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    Ok((1.0 / s).log2().min(100.0) / 100.0)
}
