//! QDWH polar decomposition `A = U_p H`.
//!
//! The iterate starts at `X₀ = A/α` with `α ≳ ‖A‖₂`, so its singular values
//! lie in `[ℓ₀, 1]`. Every step maps them through a Zolotarev rational and
//! raises the lower bound `ℓ`; the iteration stops once `|ℓ − 1| < 5u`.
//! QR-based steps are used while the weight `c` is large (the iterate is
//! ill-conditioned) and cheaper Cholesky-based steps afterwards.

mod step;
mod weights;

use serde::{Deserialize, Serialize};

pub use step::{qdwh_chol_step, qdwh_qr_step};
pub use weights::{halley_weights, WeightSchedule, WeightStep};

use crate::error::{Error, Result};
use crate::kernels::eig::SYMMETRY_RTOL;
use crate::kernels::estimate::NORM_EST_SAFETY;
use crate::kernels::{two_norm_estimate, DenseMatrix, MACHINE_EPS};

/// Cholesky steps are used once the Halley weight `c` drops to this value.
pub const DEFAULT_CHOL_SWITCH_C: f64 = 100.0;
pub const DEFAULT_MAX_ITERS: usize = 60;

/// How the driver picks between the two step implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StepVariant {
    /// QR while `c > chol_switch_c`, Cholesky afterwards.
    #[default]
    Auto,
    QrOnly,
    CholeskyOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarConfig {
    /// Lower bound on `σ_min(A)/σ_max(A)`, typically `1/κ₂(A)`.
    pub ell0: f64,
    pub max_iters: usize,
    pub conv_eps: f64,
    pub chol_switch_c: f64,
    pub variant: StepVariant,
}

impl PolarConfig {
    pub fn new(ell0: f64) -> Self {
        Self {
            ell0,
            max_iters: DEFAULT_MAX_ITERS,
            conv_eps: MACHINE_EPS,
            chol_switch_c: DEFAULT_CHOL_SWITCH_C,
            variant: StepVariant::Auto,
        }
    }

    pub fn with_variant(mut self, variant: StepVariant) -> Self {
        self.variant = variant;
        self
    }
}

impl Default for PolarConfig {
    /// Conservative `ℓ₀ = 1e-15`, valid for any matrix with `κ₂ ≤ 1e15`.
    fn default() -> Self {
        Self::new(1e-15)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarResult {
    #[serde(skip)]
    pub up: DenseMatrix,
    #[serde(skip)]
    pub h: DenseMatrix,
    pub alpha: f64,
    pub iters_qr: usize,
    pub iters_chol: usize,
    pub ell_trace: Vec<f64>,
    pub converged: bool,
}

impl PolarResult {
    pub fn iterations(&self) -> usize {
        self.iters_qr + self.iters_chol
    }
}

/// Per-step implementation policy for [`iterate`].
#[derive(Debug, Clone, Copy)]
pub(crate) enum StepPolicy {
    /// QR when `c > threshold`, Cholesky otherwise.
    SwitchOnC(f64),
    QrOnly,
    CholeskyOnly,
    /// First step QR, the rest Cholesky.
    QrFirst,
}

#[derive(Debug, Clone)]
pub(crate) struct IterationOutcome {
    pub x: DenseMatrix,
    pub iters_qr: usize,
    pub iters_chol: usize,
}

/// Applies every step of `schedule` to `x`. A failed Cholesky step is retried
/// with QR. For symmetric iterates the result is re-symmetrized after each
/// step.
pub(crate) fn iterate(
    mut x: DenseMatrix,
    schedule: &WeightSchedule,
    policy: StepPolicy,
    symmetric: bool,
) -> Result<IterationOutcome> {
    let (mut iters_qr, mut iters_chol) = (0, 0);
    for (k, w) in schedule.steps.iter().enumerate() {
        let use_qr = match policy {
            StepPolicy::SwitchOnC(t) => w.c > t,
            StepPolicy::QrOnly => true,
            StepPolicy::CholeskyOnly => false,
            StepPolicy::QrFirst => k == 0,
        };
        x = if use_qr {
            iters_qr += 1;
            qdwh_qr_step(&x, w)?
        } else {
            match qdwh_chol_step(&x, w) {
                Ok(next) => {
                    iters_chol += 1;
                    next
                }
                Err(Error::NotPositiveDefinite { index, pivot }) => {
                    log::debug!("cholesky step {k} failed at pivot {index} ({pivot:e}); using QR");
                    iters_qr += 1;
                    qdwh_qr_step(&x, w)?
                }
                Err(e) => return Err(e),
            }
        };
        if symmetric {
            x.symmetrize_in_place();
        }
    }
    Ok(IterationOutcome {
        x,
        iters_qr,
        iters_chol,
    })
}

pub(crate) fn looks_symmetric(x: &DenseMatrix) -> bool {
    x.relative_asymmetry().is_some_and(|a| a <= SYMMETRY_RTOL)
}

/// Polar decomposition by QDWH.
///
/// The user's `ℓ₀` is divided by the norm estimator's inflation factor so it
/// remains a lower bound for `σ_min(A/α)`. `H` is the symmetrized `U_pᵀA`.
pub fn polar_decompose(a: &DenseMatrix, cfg: &PolarConfig) -> Result<PolarResult> {
    if a.rows() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "polar decomposition needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !(cfg.ell0 > 0.0 && cfg.ell0 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ell0 must lie in (0, 1], got {}",
            cfg.ell0
        )));
    }
    a.check_finite()?;
    let alpha = two_norm_estimate(a)?;
    let ell0 = cfg.ell0 / NORM_EST_SAFETY;
    let schedule = WeightSchedule::until_converged(ell0, cfg.conv_eps, cfg.max_iters)?;
    let policy = match cfg.variant {
        StepVariant::Auto => StepPolicy::SwitchOnC(cfg.chol_switch_c),
        StepVariant::QrOnly => StepPolicy::QrOnly,
        StepVariant::CholeskyOnly => StepPolicy::CholeskyOnly,
    };
    let out = iterate(a.scale(1.0 / alpha), &schedule, policy, false)?;
    let up = out.x;
    up.check_finite()?;
    let h = up.tr_matmul(a).symmetrized();
    let mut ell_trace = schedule.ell_trace();
    if ell_trace.is_empty() {
        ell_trace.push(ell0);
    }
    Ok(PolarResult {
        up,
        h,
        alpha,
        iters_qr: out.iters_qr,
        iters_chol: out.iters_chol,
        ell_trace,
        converged: true,
    })
}

/// The weight schedule [`polar_decompose`] follows under `cfg`.
pub fn predicted_schedule(cfg: &PolarConfig) -> Result<WeightSchedule> {
    if !(cfg.ell0 > 0.0 && cfg.ell0 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ell0 must lie in (0, 1], got {}",
            cfg.ell0
        )));
    }
    WeightSchedule::until_converged(cfg.ell0 / NORM_EST_SAFETY, cfg.conv_eps, cfg.max_iters)
}

/// `(it_qr, it_chol)` that [`polar_decompose`] takes under `cfg`, read off
/// the scalar recurrence. Cholesky fallbacks are not predicted.
pub fn predicted_step_mix(cfg: &PolarConfig) -> Result<(usize, usize)> {
    let schedule = predicted_schedule(cfg)?;
    let qr = schedule
        .steps
        .iter()
        .filter(|w| match cfg.variant {
            StepVariant::Auto => w.c > cfg.chol_switch_c,
            StepVariant::QrOnly => true,
            StepVariant::CholeskyOnly => false,
        })
        .count();
    Ok((qr, schedule.len() - qr))
}

/// Fixed-trip-count variants for [`run_fixed_iterations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedVariant {
    QrFirst,
    CholeskyOnly,
}

/// Output of [`run_fixed_iterations`]: `r(X₀)` and the composed bound `ℓ_k`.
#[derive(Debug, Clone)]
pub struct FixedRun {
    pub x: DenseMatrix,
    pub ell: f64,
    pub schedule: WeightSchedule,
    pub iters_qr: usize,
    pub iters_chol: usize,
}

/// Applies exactly `iters` weighted Halley steps from `ell0` without any
/// scaling or convergence test, producing `r(X₀)` for the composed rational
/// `r` of type `(3^iters, 3^iters − 1)`.
pub fn run_fixed_iterations(
    x0: &DenseMatrix,
    ell0: f64,
    iters: usize,
    variant: FixedVariant,
) -> Result<FixedRun> {
    if iters == 0 {
        return Err(Error::InvalidParameter(
            "at least one iteration is required".into(),
        ));
    }
    x0.check_finite()?;
    let schedule = WeightSchedule::fixed(ell0, iters)?;
    let policy = match variant {
        FixedVariant::QrFirst => StepPolicy::QrFirst,
        FixedVariant::CholeskyOnly => StepPolicy::CholeskyOnly,
    };
    let out = iterate(x0.clone(), &schedule, policy, looks_symmetric(x0))?;
    Ok(FixedRun {
        x: out.x,
        ell: schedule.final_ell().unwrap_or(ell0),
        schedule,
        iters_qr: out.iters_qr,
        iters_chol: out.iters_chol,
    })
}

/// Largest `|r((1 − s)x − s) + 1|` over `points` equispaced `x ∈ [−1, 0]`,
/// for the rational `r` of `iters` steps from `ℓ₀ = s`.
pub fn flattening_error(s: f64, iters: usize, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::InvalidParameter(
            "need at least two sample points".into(),
        ));
    }
    let sched = WeightSchedule::fixed(s, iters)?;
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| -(i as f64) / last)
        .map(|x| (sched.eval((1.0 - s) * x - s) + 1.0).abs())
        .fold(0.0, f64::max))
}
