//! Single weighted Halley steps on a matrix iterate.

use super::weights::WeightStep;
use crate::error::Result;
use crate::kernels::{
    cholesky, qr_thin, solve_upper_right, solve_upper_transpose_right, DenseMatrix,
};

/// Inverse-free step: QR of `[√c X; I]` gives `X⁺ = (b/c) X + (a − b/c)/√c · Q₁Q₂ᵀ`.
pub fn qdwh_qr_step(x: &DenseMatrix, w: &WeightStep) -> Result<DenseMatrix> {
    let (m, n) = (x.rows(), x.cols());
    let sqrt_c = w.c.sqrt();
    let stacked = x.scale(sqrt_c).vstack(&DenseMatrix::identity(n));
    let q = qr_thin(&stacked)?.q;
    let q1 = q.submatrix(0..m, 0..n);
    let q2 = q.submatrix(m..m + n, 0..n);
    let bc = w.b / w.c;
    Ok(x.combine(bc, (w.a - bc) / sqrt_c, &q1.matmul_tr(&q2)))
}

/// Cholesky step: `Z = I + c XᵀX = WᵀW`, `X⁺ = (b/c) X + (a − b/c) X W⁻¹ W⁻ᵀ`.
///
/// Fails with `NotPositiveDefinite` when `Z` is numerically indefinite; the
/// caller should then take a QR step instead.
pub fn qdwh_chol_step(x: &DenseMatrix, w: &WeightStep) -> Result<DenseMatrix> {
    let n = x.cols();
    let mut z = x.gram();
    z.scale_in_place(w.c);
    let z = z.add_identity(1.0);
    debug_assert_eq!(z.rows(), n);
    let chol = cholesky(&z)?;
    let y = solve_upper_transpose_right(&solve_upper_right(x, &chol), &chol);
    let bc = w.b / w.c;
    Ok(x.combine(bc, w.a - bc, &y))
}
