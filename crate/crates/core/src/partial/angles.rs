use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::random::gaussian_matrix_stream;
use crate::kernels::{qr_factor, qr_full_any, singular_values, DenseMatrix, Seed};

/// Largest canonical-angle sine between `span(V0)` and `span(Q2)`, computed
/// as `σ_max(V0ᵀQ1)` for the orthogonal complement `Q1` of `Q2`.
///
/// `q1 = None` means `Q2` spans the whole space and the angle is zero.
pub fn subspace_sin_angle(
    v0: &DenseMatrix,
    q2: &DenseMatrix,
    q1: Option<&DenseMatrix>,
) -> Result<f64> {
    let m = v0.rows();
    if q2.rows() != m || v0.cols() > q2.cols() {
        return Err(Error::DimensionMismatch(format!(
            "V0 is {}x{}, Q2 is {}x{}",
            m,
            v0.cols(),
            q2.rows(),
            q2.cols()
        )));
    }
    let Some(q1) = q1 else { return Ok(0.0) };
    if q1.rows() != m || q1.cols() + q2.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "Q1 is {}x{} but Q2 has {} of {m} columns",
            q1.rows(),
            q1.cols(),
            q2.cols()
        )));
    }
    let s = singular_values(&v0.tr_matmul(q1))?;
    Ok(s[0].min(1.0))
}

/// Both sides of `sin∠(V0, Q2) ≤ ‖V0ᵀB‖₂ / σ_min(R11)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PertBound {
    pub lhs: f64,
    pub rhs: f64,
    pub sigma_min_r11: f64,
}

impl PertBound {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

/// Evaluates the subspace-containment bound for `B` (m×n, `m ≤ n`) with a
/// full QR `B = [Q1 Q2] [R11 R12; 0 R22]`, `Q2` holding the last `ell`
/// columns. A singular `R11` gives `rhs = ∞`.
pub fn verify_pert_bound(b: &DenseMatrix, v0: &DenseMatrix, ell: usize) -> Result<PertBound> {
    let (m, n) = (b.rows(), b.cols());
    let k = v0.cols();
    if m > n || v0.rows() != m || k > ell || ell > m {
        return Err(Error::DimensionMismatch(format!(
            "B is {m}x{n}, V0 is {}x{k}, split ell = {ell}",
            v0.rows()
        )));
    }
    let qr = qr_full_any(b)?;
    let split = m - ell;
    let q2 = qr.q.columns(split..m);
    if split == 0 {
        // R11 is empty, so its smallest singular value is +∞.
        return Ok(PertBound {
            lhs: 0.0,
            rhs: 0.0,
            sigma_min_r11: f64::INFINITY,
        });
    }
    let q1 = qr.q.columns(0..split);
    let lhs = subspace_sin_angle(v0, &q2, Some(&q1))?;
    let r11 = qr.r.submatrix(0..split, 0..split);
    let sigma_min = *singular_values(&r11)?.last().unwrap_or(&0.0);
    let vb = singular_values(&v0.tr_matmul(b))?[0];
    let rhs = if sigma_min > 0.0 {
        vb / sigma_min
    } else {
        f64::INFINITY
    };
    Ok(PertBound {
        lhs,
        rhs,
        sigma_min_r11: sigma_min,
    })
}

/// Kind of instance built by [`pert_bound_trial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialKind {
    /// `B` has an exact `ell`-dimensional left null space containing `V0`.
    ExactNull,
    /// As `ExactNull` with a `1e-10` relative perturbation of `B`.
    NearNull,
    /// `V0` is a random orthonormal basis.
    RandomV0,
}

/// One seeded instance `(B, V0, ell)` of the containment bound, evaluated.
/// Sizes are drawn from `4 ≤ m ≤ 40`, `m ≤ n ≤ m + 20`, `1 ≤ k ≤ ell < m`;
/// the kind cycles with the seed.
pub fn pert_bound_trial(seed: Seed) -> Result<(TrialKind, PertBound)> {
    let mut rng = seed.rng(11);
    let m = rng.random_range(4..=40usize);
    let n = rng.random_range(m..=m + 20);
    let ell = rng.random_range(1..m);
    let k = rng.random_range(1..=ell);
    let kind = match seed.0 % 3 {
        0 => TrialKind::ExactNull,
        1 => TrialKind::NearNull,
        _ => TrialKind::RandomV0,
    };
    let q = qr_factor(&gaussian_matrix_stream(m, m, seed, 0))?.q;
    let (b, v0) = match kind {
        TrialKind::RandomV0 => {
            let b = gaussian_matrix_stream(m, n, seed, 1);
            let v0 = qr_factor(&gaussian_matrix_stream(m, k, seed, 2))?
                .q
                .columns(0..k);
            (b, v0)
        }
        TrialKind::ExactNull | TrialKind::NearNull => {
            let range = q.columns(0..m - ell);
            let mut b = range.matmul(&gaussian_matrix_stream(m - ell, n, seed, 1));
            if kind == TrialKind::NearNull {
                let noise = gaussian_matrix_stream(m, n, seed, 3);
                let scale = 1e-10 * b.frobenius_norm() / noise.frobenius_norm();
                b.add_scaled_in_place(scale, &noise);
            }
            (b, q.columns(m - ell..m - ell + k))
        }
    };
    Ok((kind, verify_pert_bound(&b, &v0, ell)?))
}
