//! Full-spectrum baselines by spectral divide and conquer on the polar
//! factor.
//!
//! For symmetric `A` and a shift `σ`, the polar factor of `A − σI` is
//! `sign(A − σI)`, so `C = (I − U_p)/2` projects onto the eigenvectors with
//! eigenvalues below `σ`. Splitting along `range(C)` decouples the problem
//! into two smaller symmetric ones, which are solved recursively.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::random::gaussian_matrix_stream;
use crate::kernels::{qr_factor, qr_thin, sym_eig_dense, DenseMatrix, Seed};
use crate::polar::{polar_decompose, PolarConfig};

pub const DEFAULT_BASE_SIZE: usize = 32;
/// `trace(C)` must be this close to an integer for a split to be accepted.
pub const SPLIT_TRACE_TOL: f64 = 0.01;

const SPLIT_SEED: Seed = Seed(0xd1c0_5eed);

#[derive(Debug, Clone, Serialize)]
pub struct EigResult {
    /// Ascending.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: DenseMatrix,
    /// Number of split levels used; zero means a single dense solve.
    pub depth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SvdResult {
    #[serde(skip)]
    pub u: DenseMatrix,
    /// Descending.
    pub sigma: Vec<f64>,
    #[serde(skip)]
    pub v: DenseMatrix,
    pub depth: usize,
}

fn dense(a: &DenseMatrix) -> Result<EigResult> {
    let e = sym_eig_dense(a)?;
    Ok(EigResult {
        values: e.values,
        vectors: e.vectors,
        depth: 0,
    })
}

/// One split: an orthogonal `Q` whose first `k` columns span the invariant
/// subspace below the shift, or `None` when the split is not usable.
fn split(a: &DenseMatrix) -> Result<Option<(DenseMatrix, usize)>> {
    let n = a.rows();
    let sigma = a.trace() / n as f64;
    let shifted = a.add_identity(-sigma);
    let up = match polar_decompose(&shifted, &PolarConfig::default()) {
        Ok(r) => r.up,
        Err(Error::ZeroMatrix) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut c = up.scale(-0.5).add_identity(0.5);
    c.symmetrize_in_place();
    let t = c.trace();
    let k = t.round();
    if (t - k).abs() > SPLIT_TRACE_TOL || k < 1.0 || k >= n as f64 {
        log::debug!("no split at n = {n}: trace(C) = {t}");
        return Ok(None);
    }
    let omega = gaussian_matrix_stream(n, n, SPLIT_SEED, n as u64);
    let q = qr_factor(&c.matmul(&omega))?.q;
    Ok(Some((q, k as usize)))
}

fn eig_recursive(a: &DenseMatrix, base_size: usize) -> Result<EigResult> {
    let n = a.rows();
    if n <= base_size {
        return dense(a);
    }
    let Some((q, k)) = split(a)? else {
        return dense(a);
    };
    let (q_lo, q_hi) = (q.columns(0..k), q.columns(k..n));
    let a_lo = q_lo.tr_matmul(&a.matmul(&q_lo)).symmetrized();
    let a_hi = q_hi.tr_matmul(&a.matmul(&q_hi)).symmetrized();
    let (lo, hi) = rayon::join(
        || eig_recursive(&a_lo, base_size),
        || eig_recursive(&a_hi, base_size),
    );
    let (lo, hi) = (lo?, hi?);

    let vectors = q_lo.matmul(&lo.vectors).hstack(&q_hi.matmul(&hi.vectors));
    let mut values = lo.values;
    values.extend(hi.values);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(EigResult {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: vectors.permute_columns(&order),
        depth: 1 + lo.depth.max(hi.depth),
    })
}

/// Symmetric eigendecomposition by recursive polar-based splitting. Blocks
/// of size at most `base_size`, and blocks that fail to split, are handed to
/// the dense Jacobi solver.
pub fn qdwh_eig_full(a: &DenseMatrix, base_size: usize) -> Result<EigResult> {
    a.check_finite()?;
    crate::kernels::eig::ensure_symmetric(a)?;
    if base_size == 0 {
        return Err(Error::InvalidParameter("base_size must be positive".into()));
    }
    eig_recursive(&a.symmetrized(), base_size)
}

/// SVD through `A = U_p H`, `H = VΣVᵀ`, `U = U_p V`.
pub fn qdwh_svd_full(a: &DenseMatrix) -> Result<SvdResult> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "full svd needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let polar = polar_decompose(a, &PolarConfig::default())?;
    let eig = qdwh_eig_full(&polar.h, DEFAULT_BASE_SIZE)?;
    let n = a.cols();
    let order: Vec<usize> = (0..n).rev().collect();
    let v = eig.vectors.permute_columns(&order);
    let sigma: Vec<f64> = order.iter().map(|&i| eig.values[i].max(0.0)).collect();
    // Directions with σ below about u·‖A‖ are not resolved by the polar
    // factor, so U_p V loses orthogonality there. A QR in order of
    // decreasing σ restores it and moves column j by O(σ_j) at most.
    let f = qr_thin(&polar.up.matmul(&v))?;
    let mut u = f.q;
    for j in 0..n {
        if f.r[(j, j)] < 0.0 {
            u.col_mut(j).iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(SvdResult {
        u,
        sigma,
        v,
        depth: eig.depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{gaussian_matrix, qr_factor};

    #[test]
    fn diagonal_splits_to_the_base() {
        let d: Vec<f64> = (1..=8).map(f64::from).collect();
        let r = qdwh_eig_full(&DenseMatrix::from_diag(&d), 2).unwrap();
        for (x, y) in r.values.iter().zip(&d) {
            assert!((x - y).abs() < 1e-13);
        }
        assert_eq!(r.depth, 2);
    }

    #[test]
    fn analytic_two_by_two() {
        let a = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let r = qdwh_eig_full(&a, DEFAULT_BASE_SIZE).unwrap();
        assert!((r.values[0] + 1.0).abs() < 1e-15 && (r.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unsplittable_block_falls_back() {
        // trace/n = 2 is itself an eigenvalue, so C has a half-integer trace.
        let r = qdwh_eig_full(&DenseMatrix::from_diag(&[1.0, 2.0, 3.0]), 1).unwrap();
        assert_eq!(r.depth, 0);
        let r = qdwh_eig_full(&DenseMatrix::identity(5).scale(3.0), 1).unwrap();
        assert!(r.values.iter().all(|&x| (x - 3.0).abs() < 1e-15));
        assert!(qdwh_eig_full(&DenseMatrix::identity(2), 0).is_err());
    }

    #[test]
    fn svd_of_diagonal_and_orthogonal() {
        let r = qdwh_svd_full(&DenseMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        for (x, y) in r.sigma.iter().zip([3.0, 2.0, 1.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        let q = qr_factor(&gaussian_matrix(7, 7, Seed(1))).unwrap().q;
        let r = qdwh_svd_full(&q).unwrap();
        assert!(r.sigma.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        assert!(r.u.sub(&q.matmul(&r.v)).max_abs() < 1e-13);
        assert!(qdwh_svd_full(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn rank_deficient_svd_keeps_orthonormal_u() {
        let g = gaussian_matrix(20, 6, Seed(5));
        let a = g.matmul_tr(&g).columns(0..12);
        let r = qdwh_svd_full(&a).unwrap();
        assert!(r.u.gram().add_identity(-1.0).max_abs() < 1e-13);
        let mut us = r.u.clone();
        for (j, &s) in r.sigma.iter().enumerate() {
            us.col_mut(j).iter_mut().for_each(|x| *x *= s);
        }
        assert!(us.matmul_tr(&r.v).sub(&a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
    }
}
