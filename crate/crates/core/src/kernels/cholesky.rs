//! Cholesky factorization `Z = WᵀW` and the right-side triangular solves the
//! Cholesky-based Halley step needs.

use super::matrix::{axpy, dot, DenseMatrix};
use crate::error::{Error, Result};

/// Upper-triangular `W` with positive diagonal such that `Z = WᵀW`.
///
/// Only the upper triangle of `Z` is read. A non-positive pivot yields
/// [`Error::NotPositiveDefinite`].
pub fn cholesky(z: &DenseMatrix) -> Result<DenseMatrix> {
    if !z.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky needs a square matrix, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    z.check_finite()?;
    let n = z.rows();
    let mut w = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..j {
            let s = z[(i, j)] - dot(&w.col(i)[..i], &w.col(j)[..i]);
            w[(i, j)] = s / w[(i, i)];
        }
        let d = z[(j, j)] - dot(&w.col(j)[..j], &w.col(j)[..j]);
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        w[(j, j)] = d.sqrt();
    }
    Ok(w)
}

/// `X W⁻¹` for upper-triangular `W`.
pub fn solve_upper_right(x: &DenseMatrix, w: &DenseMatrix) -> DenseMatrix {
    let n = w.rows();
    assert_eq!(x.cols(), n, "solve_upper_right: shape mismatch");
    let mut y = x.clone();
    // Column j of Y W = X reads Y[:, k] for k < j only.
    for j in 0..n {
        let mut col = y.col(j).to_vec();
        for k in 0..j {
            let wkj = w[(k, j)];
            if wkj != 0.0 {
                axpy(-wkj, y.col(k), &mut col);
            }
        }
        let inv = 1.0 / w[(j, j)];
        col.iter_mut().for_each(|v| *v *= inv);
        y.col_mut(j).copy_from_slice(&col);
    }
    y
}

/// `X W⁻ᵀ` for upper-triangular `W`.
pub fn solve_upper_transpose_right(x: &DenseMatrix, w: &DenseMatrix) -> DenseMatrix {
    let n = w.rows();
    assert_eq!(x.cols(), n, "solve_upper_transpose_right: shape mismatch");
    let mut y = x.clone();
    // Y Wᵀ = X: column j is sum_{k >= j} Y[:, k] W[j, k].
    for j in (0..n).rev() {
        let mut col = y.col(j).to_vec();
        for k in (j + 1)..n {
            let wjk = w[(j, k)];
            if wjk != 0.0 {
                axpy(-wjk, y.col(k), &mut col);
            }
        }
        let inv = 1.0 / w[(j, j)];
        col.iter_mut().for_each(|v| *v *= inv);
        y.col_mut(j).copy_from_slice(&col);
    }
    y
}
