//! Householder QR with explicit accumulation of the orthogonal factor.
//!
//! No column pivoting. Callers that need rank revelation either rely on the
//! input already being generic or multiply by a Gaussian matrix first.

use rayon::prelude::*;

use super::matrix::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

const PAR_COLS_THRESHOLD: usize = 1 << 16;

/// `A = Q R` with `Q` orthogonal (or with orthonormal columns for the thin
/// variant) and `R` upper triangular / trapezoidal.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

/// Compact Householder representation: `R` on and above the diagonal, the
/// essential parts of the reflectors below it.
struct Householder {
    packed: DenseMatrix,
    tau: Vec<f64>,
}

impl Householder {
    fn factor(a: &DenseMatrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut packed = a.clone();
        let steps = m.min(n);
        let mut tau = vec![0.0; steps];
        for k in 0..steps {
            let (t, beta) = make_reflector(&mut packed.col_mut(k)[k..]);
            tau[k] = t;
            packed[(k, k)] = beta;
            if t == 0.0 || k + 1 == n {
                continue;
            }
            let v: Vec<f64> = packed.col(k)[k + 1..].to_vec();
            let data = &mut packed.data_mut()[(k + 1) * m..];
            let apply = |col: &mut [f64]| apply_reflector(t, &v, &mut col[k..]);
            if (m - k) * (n - k) >= PAR_COLS_THRESHOLD {
                data.par_chunks_mut(m).for_each(apply);
            } else {
                data.chunks_mut(m).for_each(apply);
            }
        }
        Self { packed, tau }
    }

    /// Upper-triangular factor with `rows` rows (`m` for full, `n` for thin).
    fn r(&self, rows: usize) -> DenseMatrix {
        let n = self.packed.cols();
        let mut r = DenseMatrix::zeros(rows, n);
        for j in 0..n {
            for i in 0..=j.min(rows - 1) {
                r[(i, j)] = self.packed[(i, j)];
            }
        }
        r
    }

    /// First `cols` columns of `Q = H_0 H_1 ... H_{s-1}`.
    fn q(&self, cols: usize) -> DenseMatrix {
        let m = self.packed.rows();
        let mut q = DenseMatrix::zeros(m, cols);
        for i in 0..cols.min(m) {
            q[(i, i)] = 1.0;
        }
        for k in (0..self.tau.len()).rev() {
            let t = self.tau[k];
            if t == 0.0 || k >= cols {
                continue;
            }
            let v = &self.packed.col(k)[k + 1..];
            let data = &mut q.data_mut()[k * m..];
            let apply = |col: &mut [f64]| apply_reflector(t, v, &mut col[k..]);
            if (m - k) * (cols - k) >= PAR_COLS_THRESHOLD {
                data.par_chunks_mut(m).for_each(apply);
            } else {
                data.chunks_mut(m).for_each(apply);
            }
        }
        q
    }
}

/// Overwrites `x` with the reflector's essential part (`x[1..]`) and returns
/// `(tau, beta)` such that `(I - tau v vᵀ) x = beta e_1` with `v = [1; x[1..]]`.
fn make_reflector(x: &mut [f64]) -> (f64, f64) {
    let alpha = x[0];
    let tail_norm = norm2(&x[1..]);
    if tail_norm == 0.0 {
        return (0.0, alpha);
    }
    let beta = -alpha.signum() * alpha.hypot(tail_norm);
    let tau = (beta - alpha) / beta;
    let inv = 1.0 / (alpha - beta);
    x[1..].iter_mut().for_each(|v| *v *= inv);
    (tau, beta)
}

/// `y := (I - tau v vᵀ) y` with implicit leading one in `v`.
#[inline]
fn apply_reflector(tau: f64, v_tail: &[f64], y: &mut [f64]) {
    let w = tau * (y[0] + dot(v_tail, &y[1..]));
    if w == 0.0 {
        return;
    }
    y[0] -= w;
    for (yi, vi) in y[1..].iter_mut().zip(v_tail) {
        *yi -= w * vi;
    }
}

/// Full QR of an `m x n` matrix with `m ≥ n`: `Q` is `m x m`, `R` is `m x n`.
pub fn qr_factor(a: &DenseMatrix) -> Result<QrFactors> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "qr_factor needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()?;
    let h = Householder::factor(a);
    Ok(QrFactors {
        q: h.q(a.rows()),
        r: h.r(a.rows()),
    })
}

/// Economy QR of an `m x n` matrix with `m ≥ n`: `Q` is `m x n`, `R` is `n x n`.
pub fn qr_thin(a: &DenseMatrix) -> Result<QrFactors> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "qr_thin needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()?;
    let h = Householder::factor(a);
    Ok(QrFactors {
        q: h.q(a.cols()),
        r: h.r(a.cols()),
    })
}

/// Full QR of any shape, including wide matrices: `Q` is `m x m`, `R` is `m x n`.
pub fn qr_full_any(a: &DenseMatrix) -> Result<QrFactors> {
    a.check_finite()?;
    let h = Householder::factor(a);
    Ok(QrFactors {
        q: h.q(a.rows()),
        r: h.r(a.rows()),
    })
}
