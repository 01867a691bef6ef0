//! Dense symmetric eigensolver (cyclic Jacobi).
//!
//! Jacobi is slow for large matrices but very accurate, and the partial
//! solvers only hand it the reduced Rayleigh-Ritz problem.

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Inputs whose relative asymmetry exceeds this are rejected.
pub const SYMMETRY_RTOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in nondecreasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

pub(crate) fn ensure_symmetric(s: &DenseMatrix) -> Result<()> {
    match s.relative_asymmetry() {
        None => Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        ))),
        Some(a) if a > SYMMETRY_RTOL => Err(Error::NotSymmetric { asymmetry: a }),
        Some(_) => Ok(()),
    }
}

/// `S = V diag(λ) Vᵀ` with `λ` ascending.
pub fn sym_eig_dense(s: &DenseMatrix) -> Result<SymEig> {
    s.check_finite()?;
    ensure_symmetric(s)?;
    let n = s.rows();
    let mut a = s.symmetrized();
    let mut v = DenseMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs()
                    <= (f64::EPSILON * (app.abs() * aqq.abs()).sqrt()).max(f64::MIN_POSITIVE)
                {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                rotate(&mut a, p, q, c, sn);
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                let (vp, vq) = v.two_cols_mut(p, q);
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - sn * xq;
                    *y = sn * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let diag = a.diag();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    Ok(SymEig {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.permute_columns(&order),
    })
}

/// Applies the rotation to columns `p`, `q` of the off-diagonal part and
/// mirrors the result into rows `p`, `q`.
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    {
        let (cp, cq) = a.two_cols_mut(p, q);
        for r in 0..n {
            if r == p || r == q {
                continue;
            }
            let (x, y) = (cp[r], cq[r]);
            cp[r] = c * x - s * y;
            cq[r] = s * x + c * y;
        }
    }
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        a[(p, r)] = a[(r, p)];
        a[(q, r)] = a[(r, q)];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::random::{gaussian_matrix, Seed};

    #[test]
    fn identity_values() {
        let e = sym_eig_dense(&DenseMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn swap_matrix_analytic() {
        let s = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = sym_eig_dense(&s).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let h = 1.0 / 2f64.sqrt();
        // (1, -1)/√2 for -1 and (1, 1)/√2 for +1, up to sign.
        assert!((e.vectors[(0, 0)].abs() - h).abs() < 1e-15);
        assert!((e.vectors[(0, 0)] + e.vectors[(1, 0)]).abs() < 1e-15);
        assert!((e.vectors[(0, 1)] - e.vectors[(1, 1)]).abs() < 1e-15);
    }

    #[test]
    fn random_symmetric_identities() {
        let g = gaussian_matrix(20, 20, Seed(4));
        let s = g.add_scaled(1.0, &g.transpose());
        let e = sym_eig_dense(&s).unwrap();
        let lam = DenseMatrix::from_diag(&e.values);
        let resid = s
            .matmul(&e.vectors)
            .sub(&e.vectors.matmul(&lam))
            .frobenius_norm();
        assert!(resid < 1e-13 * s.frobenius_norm(), "resid {resid}");
        let orth = e
            .vectors
            .tr_matmul(&e.vectors)
            .sub(&DenseMatrix::identity(20))
            .frobenius_norm();
        assert!(orth < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_asymmetric() {
        let s = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig_dense(&s), Err(Error::NotSymmetric { .. })));
        let r = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            sym_eig_dense(&r),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn one_by_one() {
        let e = sym_eig_dense(&DenseMatrix::from_diag(&[-3.5])).unwrap();
        assert_eq!(e.values, vec![-3.5]);
        assert_eq!(e.vectors[(0, 0)], 1.0);
    }
}
