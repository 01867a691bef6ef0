//! Dense SVD by one-sided (Hestenes) Jacobi.

use super::matrix::{dot, norm2, DenseMatrix};
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U diag(σ) Vᵀ` with `σ` nonincreasing. For an `m x n` input
/// `U` is `m x p`, `V` is `n x p`, `p = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

pub fn svd_dense(a: &DenseMatrix) -> Result<Svd> {
    a.check_finite()?;
    if a.rows() >= a.cols() {
        Ok(svd_tall(a))
    } else {
        let t = svd_tall(&a.transpose());
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// Singular values only.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(svd_dense(a)?.sigma)
}

fn svd_tall(a: &DenseMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut g = a.clone();
    let mut v = DenseMatrix::identity(n);
    let tol = f64::EPSILON * (m as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (gp, gq) = g.two_cols_mut(p, q);
                let alpha = dot(gp, gp);
                let beta = dot(gq, gq);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(gp, gq);
                if gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for (x, y) in gp.iter_mut().zip(gq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
                let (vp, vq) = v.two_cols_mut(p, q);
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm2(g.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = DenseMatrix::zeros(m, n);
    let mut sigma = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 && s.is_normal() {
            let inv = 1.0 / s;
            for (o, x) in u.col_mut(dst).iter_mut().zip(g.col(src)) {
                *o = x * inv;
            }
        } else {
            missing.push(dst);
        }
    }
    complete_basis(&mut u, &missing);
    Svd {
        u,
        sigma,
        v: v.permute_columns(&order),
    }
}

/// Fills the listed columns of `u` with unit vectors orthogonal to all other
/// columns, drawing candidates from the standard basis.
fn complete_basis(u: &mut DenseMatrix, missing: &[usize]) {
    let m = u.rows();
    let mut filled: Vec<usize> = (0..u.cols()).filter(|j| !missing.contains(j)).collect();
    let mut candidate = 0;
    for &dst in missing {
        while candidate < m {
            let mut w = vec![0.0; m];
            w[candidate] = 1.0;
            candidate += 1;
            // Two passes of classical Gram-Schmidt.
            for _ in 0..2 {
                for &j in &filled {
                    let h = dot(u.col(j), &w);
                    for (wi, ui) in w.iter_mut().zip(u.col(j)) {
                        *wi -= h * ui;
                    }
                }
            }
            let nrm = norm2(&w);
            if nrm > 0.5 {
                for (o, x) in u.col_mut(dst).iter_mut().zip(&w) {
                    *o = x / nrm;
                }
                filled.push(dst);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::random::{gaussian_matrix, Seed};

    fn reconstruct(s: &Svd) -> DenseMatrix {
        s.u.matmul(&DenseMatrix::from_diag(&s.sigma))
            .matmul_tr(&s.v)
    }

    fn orth(q: &DenseMatrix) -> f64 {
        q.tr_matmul(q)
            .sub(&DenseMatrix::identity(q.cols()))
            .frobenius_norm()
    }

    #[test]
    fn diagonal_values() {
        let s = svd_dense(&DenseMatrix::from_diag(&[3.0, 2.0, 1.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 2.0, 1.0]);
        let s = svd_dense(&DenseMatrix::from_diag(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 2.0, 1.0]);
        assert!(
            reconstruct(&s)
                .sub(&DenseMatrix::from_diag(&[1.0, 3.0, 2.0]))
                .max_abs()
                < 1e-15
        );
    }

    #[test]
    fn identity_all_ones() {
        let s = svd_dense(&DenseMatrix::identity(5)).unwrap();
        assert!(s.sigma.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn rank_one_outer_product() {
        // ‖u‖ = 2, ‖v‖ = 3 so σ₁ = 6 and the rest vanish.
        let u = [2.0 / 3f64.sqrt(); 3];
        let v = [3.0 / 2.0; 4];
        let a = DenseMatrix::from_fn(3, 4, |i, j| u[i] * v[j]);
        let s = svd_dense(&a).unwrap();
        assert!((s.sigma[0] - 6.0).abs() < 1e-14);
        assert!(s.sigma[1..].iter().all(|&x| x < 1e-14));
        assert!(orth(&s.u) < 1e-14 && orth(&s.v) < 1e-14);
        assert!(reconstruct(&s).sub(&a).max_abs() < 1e-14);
    }

    #[test]
    fn random_tall_and_wide() {
        for (m, n) in [(30, 12), (12, 30), (25, 25)] {
            let a = gaussian_matrix(m, n, Seed((m * n) as u64));
            let s = svd_dense(&a).unwrap();
            let tol = 50.0 * m.max(n) as f64 * f64::EPSILON;
            assert!(reconstruct(&s).sub(&a).frobenius_norm() < tol * a.frobenius_norm());
            assert!(orth(&s.u) < tol && orth(&s.v) < tol);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn zero_matrix_has_orthonormal_factors() {
        let s = svd_dense(&DenseMatrix::zeros(4, 3)).unwrap();
        assert_eq!(s.sigma, vec![0.0; 3]);
        assert!(orth(&s.u) < 1e-15);
    }
}
