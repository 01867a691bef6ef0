use super::{split_null_space, NullSpaceSplit, PartialDiagnostics, PartialSvdResult};
use crate::error::{Error, Result};
use crate::kernels::{svd_dense, two_norm_estimate, DenseMatrix, Seed, MACHINE_EPS};
use crate::polar::{iterate, StepPolicy, WeightSchedule, DEFAULT_CHOL_SWITCH_C, DEFAULT_MAX_ITERS};

/// Everything up to the reduced SVD of the truncated solver.
#[derive(Debug, Clone)]
pub struct SvdSubspace {
    /// Norm estimate, `α ≥ ‖A‖₂` in practice.
    pub alpha: f64,
    pub schedule: WeightSchedule,
    pub iters_qr: usize,
    pub iters_chol: usize,
    pub split: NullSpaceSplit,
}

/// Steps 1 to 5: QDWH from `ℓ₀ = s` on `A/α` until `|ℓ − 1| < 5u`, which
/// drives every singular value in `[s, 1]` to one, then the QR of
/// `I − r(Ã)ᵀr(Ã)` split at the deficiency index.
///
/// The trip count comes from the scalar recurrence before any matrix work.
/// Steps with weight `c > 100` use the QR-based iteration, the rest
/// Cholesky.
pub fn partial_svd_subspace(
    a: &DenseMatrix,
    s: f64,
    tol: f64,
    randomize: bool,
    seed: Seed,
) -> Result<SvdSubspace> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::DimensionMismatch(format!(
            "partial svd needs rows >= cols, got {m}x{n}"
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    let alpha = two_norm_estimate(a)?;
    let schedule = WeightSchedule::until_converged(s, MACHINE_EPS, DEFAULT_MAX_ITERS)?;
    let out = iterate(
        a.scale(1.0 / alpha),
        &schedule,
        StepPolicy::SwitchOnC(DEFAULT_CHOL_SWITCH_C),
        false,
    )?;
    let mut b = out.x.gram();
    b.scale_in_place(-1.0);
    let split = split_null_space(b.add_identity(1.0), tol, randomize, seed)?;
    Ok(SvdSubspace {
        alpha,
        schedule,
        iters_qr: out.iters_qr,
        iters_chol: out.iters_chol,
        split,
    })
}

/// Singular triplets with `σ > s·α`, where `α` is the norm estimate.
///
/// The SVD of `A·Q2` gives `U1`, `Σ1` and `V1 = Q2·Ṽ1`.
pub fn qdwh_partial_svd(
    a: &DenseMatrix,
    s: f64,
    tol: f64,
    randomize: bool,
    seed: Seed,
) -> Result<PartialSvdResult> {
    let sub = partial_svd_subspace(a, s, tol, randomize, seed)?;
    let n = a.cols();
    let q2 = sub.split.q2();
    let ell = q2.cols();

    let reduced = svd_dense(&a.matmul(&q2))?;
    let cut = s * sub.alpha;
    let k = reduced.sigma.iter().take_while(|&&x| x > cut).count();
    if k == 0 {
        return Err(Error::EmptySpectrum);
    }
    let band = n as f64 * MACHINE_EPS * sub.alpha;
    let borderline = reduced.sigma[..k]
        .iter()
        .filter(|&&x| x - cut <= band)
        .count();

    Ok(PartialSvdResult {
        u1: reduced.u.columns(0..k),
        sigma1: reduced.sigma[..k].to_vec(),
        v1: q2.matmul(&reduced.v.columns(0..k)),
        subspace_size: ell,
        alpha: sub.alpha,
        threshold: s,
        rank_index: sub.split.ind,
        diagnostics: PartialDiagnostics {
            ell_trace: sub.schedule.ell_trace(),
            tol,
            iters_qr: sub.iters_qr,
            iters_chol: sub.iters_chol,
            randomized: randomize,
            no_savings: 2 * ell > n,
            borderline,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial::DEFAULT_RANK_TOL;

    #[test]
    fn diagonal_threshold_selects_two() {
        let a = DenseMatrix::from_diag(&[1.0, 0.5, 0.05]);
        let r = qdwh_partial_svd(&a, 0.1, DEFAULT_RANK_TOL, false, Seed(0)).unwrap();
        assert_eq!(r.k(), 2);
        assert!((r.sigma1[0] - 1.0).abs() < 1e-14 && (r.sigma1[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn identity_keeps_everything() {
        let r = qdwh_partial_svd(
            &DenseMatrix::identity(6),
            0.5,
            DEFAULT_RANK_TOL,
            false,
            Seed(0),
        )
        .unwrap();
        assert_eq!(r.k(), 6);
        assert!(r.sigma1.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rejects_bad_input() {
        let i = DenseMatrix::identity(3);
        assert!(qdwh_partial_svd(&DenseMatrix::zeros(2, 3), 0.1, 0.01, false, Seed(0)).is_err());
        assert!(qdwh_partial_svd(&i, 0.0, 0.01, false, Seed(0)).is_err());
        assert!(matches!(
            qdwh_partial_svd(&DenseMatrix::zeros(3, 3), 0.1, 0.01, false, Seed(0)),
            Err(Error::ZeroMatrix)
        ));
    }
}
