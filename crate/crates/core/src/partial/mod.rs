//! Partial spectra through QDWH: the negative eigenpairs of a symmetric
//! matrix and the singular triplets above a relative threshold.
//!
//! Both solvers apply a low-degree Zolotarev rational to a shifted, scaled
//! matrix so that the wanted part of the spectrum collapses onto the null
//! space of a derived matrix `B`. A QR factorization of `B` exposes that null
//! space through small diagonal entries of `R`, and Rayleigh–Ritz on the
//! trailing columns of `Q` recovers the pairs.

mod angles;
mod eig;
mod svd;

use serde::{Deserialize, Serialize};

pub use angles::{pert_bound_trial, subspace_sin_angle, verify_pert_bound, PertBound, TrialKind};
pub use eig::{partial_eig_subspace, qdwh_partial_eig, EigSubspace};
pub use svd::{partial_svd_subspace, qdwh_partial_svd, SvdSubspace};

use crate::error::{Error, Result};
use crate::kernels::{gaussian_matrix, qr_factor, DenseMatrix, Seed, MACHINE_EPS};
use crate::polar::WeightSchedule;

/// Threshold on `|R_ii|` that marks the start of the numerical null space.
pub const DEFAULT_RANK_TOL: f64 = 0.01;
pub const DEFAULT_EIG_ITERS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanVariant {
    TwoStep,
    ThreeStep,
    SvdThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftPlan {
    pub s: f64,
    pub qdwh_iters: usize,
    pub variant: PlanVariant,
}

impl ShiftPlan {
    /// Threshold plan for the truncated SVD: the iteration count is the
    /// number of steps the scalar recurrence from `ℓ₀ = s` needs to reach
    /// `|ℓ − 1| < 5u`.
    pub fn svd_threshold(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "s must lie in (0, 1), got {s}"
            )));
        }
        let iters = WeightSchedule::until_converged(s, MACHINE_EPS, 60)?.len();
        Ok(Self {
            s,
            qdwh_iters: iters,
            variant: PlanVariant::SvdThreshold,
        })
    }
}

impl Default for ShiftPlan {
    fn default() -> Self {
        Self {
            s: 0.2,
            qdwh_iters: 3,
            variant: PlanVariant::ThreeStep,
        }
    }
}

/// Smallest shift for which `iters` steps flatten `[−1, 0]` onto `−1` to
/// working precision: 0.875 for two steps, 0.2 for three.
pub fn choose_shift(qdwh_iters: usize) -> Result<ShiftPlan> {
    match qdwh_iters {
        2 => Ok(ShiftPlan {
            s: 0.875,
            qdwh_iters: 2,
            variant: PlanVariant::TwoStep,
        }),
        3 => Ok(ShiftPlan::default()),
        other => Err(Error::UnsupportedPlan(other)),
    }
}

/// First (1-based) index `i` with `|R_ii| < tol`, or `None`.
pub fn detect_deficiency_index(r: &DenseMatrix, tol: f64) -> Option<usize> {
    r.diag().iter().position(|d| d.abs() < tol).map(|i| i + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialDiagnostics {
    pub ell_trace: Vec<f64>,
    pub tol: f64,
    pub iters_qr: usize,
    pub iters_chol: usize,
    pub randomized: bool,
    /// More than half of the columns were kept.
    pub no_savings: bool,
    /// Returned values within `n·u·‖A‖` of the cutoff.
    pub borderline: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartialEigResult {
    /// Negative eigenvalues, ascending.
    pub lambda_minus: Vec<f64>,
    #[serde(skip)]
    pub v: DenseMatrix,
    pub subspace_size: usize,
    /// Lanczos lower bound; the matrix was scaled by `1/|mu|`.
    pub mu: f64,
    pub shift: f64,
    pub rank_index: usize,
    pub diagnostics: PartialDiagnostics,
}

impl PartialEigResult {
    pub fn k(&self) -> usize {
        self.lambda_minus.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartialSvdResult {
    #[serde(skip)]
    pub u1: DenseMatrix,
    /// Singular values above `threshold·alpha`, descending.
    pub sigma1: Vec<f64>,
    #[serde(skip)]
    pub v1: DenseMatrix,
    pub subspace_size: usize,
    pub alpha: f64,
    pub threshold: f64,
    pub rank_index: usize,
    pub diagnostics: PartialDiagnostics,
}

impl PartialSvdResult {
    pub fn k(&self) -> usize {
        self.sigma1.len()
    }
}

/// QR of `B` (or `BΩ`) split at the deficiency index `ind`: `Q2` is the
/// trailing `n − ind + 1` columns of `Q`.
#[derive(Debug, Clone)]
pub struct NullSpaceSplit {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    /// 1-based deficiency index.
    pub ind: usize,
}

impl NullSpaceSplit {
    pub fn ell(&self) -> usize {
        self.q.cols() - self.ind + 1
    }

    pub fn q1(&self) -> Option<DenseMatrix> {
        (self.ind > 1).then(|| self.q.columns(0..self.ind - 1))
    }

    pub fn q2(&self) -> DenseMatrix {
        self.q.columns(self.ind - 1..self.q.cols())
    }

    /// Leading `(ind − 1)`-square block of `R`, if nonempty.
    pub fn r11(&self) -> Option<DenseMatrix> {
        (self.ind > 1).then(|| self.r.submatrix(0..self.ind - 1, 0..self.ind - 1))
    }
}

pub(crate) fn split_null_space(
    b: DenseMatrix,
    tol: f64,
    randomize: bool,
    seed: Seed,
) -> Result<NullSpaceSplit> {
    let n = b.cols();
    let b = if randomize {
        b.matmul(&gaussian_matrix(n, n, seed))
    } else {
        b
    };
    let qr = qr_factor(&b)?;
    let ind = detect_deficiency_index(&qr.r, tol).ok_or(Error::EmptySpectrum)?;
    let split = NullSpaceSplit {
        q: qr.q,
        r: qr.r,
        ind,
    };
    let ell = split.ell();
    if 2 * ell > n {
        log::warn!("null-space basis keeps {ell} of {n} columns; no savings over a full solve");
    }
    Ok(split)
}
