//! Cheap spectral estimates: a 2-norm estimate for scaling and a Lanczos
//! lower bound on the smallest eigenvalue.

use super::eig::{ensure_symmetric, sym_eig_dense};
use super::matrix::{axpy, dot, norm2, DenseMatrix};
use super::random::{gaussian_matrix_stream, Seed};
use crate::error::{Error, Result};

/// Start vectors are fixed so estimates are reproducible.
const START_SEED: Seed = Seed(0x005e_ed0f_1a2c);

/// Power iteration stops once the estimate changes by less than this.
pub const NORM_EST_RTOL: f64 = 1e-5;
pub const NORM_EST_MAX_ITERS: usize = 100;
/// Inflation applied to the power-iteration estimate so `A / α` has
/// spectral norm at most one in practice.
pub const NORM_EST_SAFETY: f64 = 1.05;

pub const LANCZOS_DEFAULT_STEPS: usize = 30;
/// A negative Lanczos bound is pushed further down by this factor.
pub const LANCZOS_SAFETY: f64 = 1.1;

fn unit_start(n: usize, stream: u64) -> Vec<f64> {
    let mut x = gaussian_matrix_stream(n, 1, START_SEED, stream).into_data();
    let nrm = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nrm);
    x
}

/// Estimate of `‖A‖₂` by power iteration on `AᵀA`, inflated by
/// [`NORM_EST_SAFETY`].
pub fn two_norm_estimate(a: &DenseMatrix) -> Result<f64> {
    a.check_finite()?;
    if a.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let mut x = unit_start(a.cols(), 0);
    let mut est = 0.0;
    for _ in 0..NORM_EST_MAX_ITERS {
        let y = a.matvec(&x);
        let yn = norm2(&y);
        let z = a.tr_matvec(&y);
        let zn = norm2(&z);
        if yn == 0.0 || zn == 0.0 {
            break;
        }
        // ‖AᵀAx‖ / ‖Ax‖ ≥ ‖Ax‖ for unit x, and both are bounded by σ_max.
        let next = zn / yn;
        let converged = (next - est).abs() <= NORM_EST_RTOL * next;
        est = next;
        if converged {
            break;
        }
        x = z.into_iter().map(|v| v / zn).collect();
    }
    // A start vector orthogonal to every dominant direction would report zero.
    if est == 0.0 {
        est = a.frobenius_norm();
    }
    Ok(NORM_EST_SAFETY * est)
}

/// Lower bound `μ ≲ λ_min(A)` from `steps` Lanczos iterations with full
/// reorthogonalization.
///
/// The smallest Ritz value is lowered by its residual bound
/// `β_m |s_m|`, and a negative result is inflated by [`LANCZOS_SAFETY`].
/// A nonnegative return means no negative eigenvalue was detected.
pub fn lanczos_min_bound(a: &DenseMatrix, steps: usize) -> Result<f64> {
    a.check_finite()?;
    ensure_symmetric(a)?;
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "lanczos needs at least one step".into(),
        ));
    }
    let n = a.rows();
    let steps = steps.min(n);
    let breakdown = f64::EPSILON * (n as f64).sqrt() * a.frobenius_norm();

    let mut basis: Vec<Vec<f64>> = vec![unit_start(n, 1)];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut last_beta = 0.0;
    for j in 0..steps {
        let q = &basis[j];
        let mut w = a.matvec(q);
        let aj = dot(q, &w);
        alpha.push(aj);
        for _ in 0..2 {
            for b in &basis {
                let h = dot(b, &w);
                axpy(-h, b, &mut w);
            }
        }
        let bj = norm2(&w);
        last_beta = bj;
        if j + 1 == steps || bj <= breakdown {
            if bj <= breakdown {
                last_beta = 0.0;
            }
            break;
        }
        beta.push(bj);
        basis.push(w.into_iter().map(|v| v / bj).collect());
    }

    let m = alpha.len();
    let mut t = DenseMatrix::from_diag(&alpha);
    for (i, &b) in beta.iter().enumerate().take(m - 1) {
        t[(i, i + 1)] = b;
        t[(i + 1, i)] = b;
    }
    let eig = sym_eig_dense(&t)?;
    let theta = eig.values[0];
    let residual = last_beta * eig.vectors[(m - 1, 0)].abs();
    let bound = theta - residual;
    Ok(if bound < 0.0 {
        LANCZOS_SAFETY * bound
    } else {
        bound
    })
}
