use super::{split_null_space, NullSpaceSplit, PartialDiagnostics, PartialEigResult, ShiftPlan};
use crate::error::{Error, Result};
use crate::kernels::eig::ensure_symmetric;
use crate::kernels::{
    lanczos_min_bound, sym_eig_dense, DenseMatrix, Seed, LANCZOS_DEFAULT_STEPS, MACHINE_EPS,
};
use crate::polar::{run_fixed_iterations, FixedRun, FixedVariant};

/// Everything up to the Rayleigh–Ritz step of the partial eigensolver.
#[derive(Debug, Clone)]
pub struct EigSubspace {
    /// Lanczos lower bound on `λ_min(A)`; negative.
    pub mu: f64,
    /// `A / |μ|`.
    pub a_scaled: DenseMatrix,
    pub fixed: FixedRun,
    pub split: NullSpaceSplit,
}

/// Steps 1 to 5: scale by the Lanczos bound, apply the shifted rational,
/// and split the QR of `B = (r(Ã) + I)/2` at the deficiency index.
///
/// After scaling the spectrum lies in `[−1, ‖A‖/|μ|]`. The shift
/// `(1 − s)A − sI` sends `[−1, 0]` into `[−1, −s]`, which
/// `plan.qdwh_iters` Cholesky-based steps flatten onto `−1`, so the negative
/// eigenspace becomes the null space of `B`.
pub fn partial_eig_subspace(
    a: &DenseMatrix,
    plan: &ShiftPlan,
    randomize: bool,
    tol: f64,
    seed: Seed,
) -> Result<EigSubspace> {
    a.check_finite()?;
    ensure_symmetric(a)?;
    let s = plan.s;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "shift must lie in (0, 1), got {s}"
        )));
    }
    let mu = lanczos_min_bound(a, LANCZOS_DEFAULT_STEPS)?;
    if mu >= 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let a_scaled = a.scale(1.0 / mu.abs());
    let shifted = a_scaled.scale(1.0 - s).add_identity(-s);
    let fixed = run_fixed_iterations(&shifted, s, plan.qdwh_iters, FixedVariant::CholeskyOnly)?;
    let mut b = fixed.x.add_identity(1.0);
    b.scale_in_place(0.5);
    let split = split_null_space(b, tol, randomize, seed)?;
    Ok(EigSubspace {
        mu,
        a_scaled,
        fixed,
        split,
    })
}

/// Negative eigenpairs of a symmetric matrix.
///
/// Rayleigh–Ritz on the basis from [`partial_eig_subspace`] keeps the Ritz
/// pairs with `λ < 0` and rescales them by `|μ|`. Returns `EmptySpectrum`
/// when no negative eigenvalue is found.
pub fn qdwh_partial_eig(
    a: &DenseMatrix,
    plan: &ShiftPlan,
    randomize: bool,
    tol: f64,
    seed: Seed,
) -> Result<PartialEigResult> {
    let sub = partial_eig_subspace(a, plan, randomize, tol, seed)?;
    let n = a.rows();
    let q2 = sub.split.q2();
    let ell = q2.cols();

    let h = q2.tr_matmul(&sub.a_scaled.matmul(&q2)).symmetrized();
    let ritz = sym_eig_dense(&h)?;
    let k = ritz.values.iter().take_while(|&&l| l < 0.0).count();
    if k == 0 {
        return Err(Error::EmptySpectrum);
    }
    let v = q2.matmul(&ritz.vectors.columns(0..k));
    let cutoff = n as f64 * MACHINE_EPS * sub.a_scaled.frobenius_norm();
    let borderline = ritz.values[..k].iter().filter(|&&l| l >= -cutoff).count();
    let scale = sub.mu.abs();
    let lambda_minus = ritz.values[..k].iter().map(|l| l * scale).collect();

    Ok(PartialEigResult {
        lambda_minus,
        v,
        subspace_size: ell,
        mu: sub.mu,
        shift: plan.s,
        rank_index: sub.split.ind,
        diagnostics: PartialDiagnostics {
            ell_trace: sub.fixed.schedule.ell_trace(),
            tol,
            iters_qr: sub.fixed.iters_qr,
            iters_chol: sub.fixed.iters_chol,
            randomized: randomize,
            no_savings: 2 * ell > n,
            borderline,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial::{choose_shift, DEFAULT_RANK_TOL};

    #[test]
    fn diagonal_with_one_negative() {
        let a = DenseMatrix::from_diag(&[-0.5, 1.0, 2.0, 3.0]);
        let r = qdwh_partial_eig(
            &a,
            &choose_shift(3).unwrap(),
            false,
            DEFAULT_RANK_TOL,
            Seed(0),
        )
        .unwrap();
        assert_eq!(r.k(), 1);
        assert!((r.lambda_minus[0] + 0.5).abs() < 1e-14);
        assert!((r.v[(0, 0)].abs() - 1.0).abs() < 1e-14);
        // The zero first column of B stops the unpivoted QR immediately.
        assert_eq!(r.rank_index, 1);
        assert!(r.diagnostics.no_savings);
    }

    #[test]
    fn positive_definite_is_empty() {
        let d: Vec<f64> = (1..=16).map(f64::from).collect();
        let a = DenseMatrix::from_diag(&d);
        let r = qdwh_partial_eig(
            &a,
            &choose_shift(3).unwrap(),
            false,
            DEFAULT_RANK_TOL,
            Seed(0),
        );
        assert!(matches!(r, Err(Error::EmptySpectrum)));
    }

    #[test]
    fn rejects_asymmetric_and_bad_shift() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        assert!(qdwh_partial_eig(&a, &ShiftPlan::default(), false, 0.01, Seed(0)).is_err());
        let plan = ShiftPlan {
            s: 1.5,
            ..ShiftPlan::default()
        };
        assert!(qdwh_partial_eig(&DenseMatrix::identity(2), &plan, false, 0.01, Seed(0)).is_err());
    }
}
