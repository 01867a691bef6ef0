//! Dynamically weighted Halley coefficients and the scalar rational maps
//! they define.
//!
//! Each step applies `r(x) = x (a + b x²) / (1 + c x²)`, the scaled type
//! (3, 2) Zolotarev approximant to `sign(x)` on `[-1, -ℓ] ∪ [ℓ, 1]`.
//! Composing `k` steps gives a type `(3^k, 3^k − 1)` approximant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One Halley coefficient triple together with the interval bound it was
/// computed from and the bound it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightStep {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub ell_in: f64,
    pub ell_out: f64,
}

impl WeightStep {
    /// Evaluates this step's rational function at a scalar.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        let x2 = x * x;
        x * (self.a + self.b * x2) / (1.0 + self.c * x2)
    }
}

/// Coefficients for interval bound `ell ∈ (0, 1]`.
///
/// With `L = ℓ²` and `d = ∛(4(1 − L)/L²)`:
/// `a = √(1 + d) + ½ √(8 − 4d + 8(2 − L)/(L √(1 + d)))`,
/// `b = (a − 1)²/4`, `c = a + b − 1`. All quantities are real on `(0, 1]`.
pub fn halley_weights(ell: f64) -> Result<WeightStep> {
    if !(ell > 0.0 && ell <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ell must lie in (0, 1], got {ell}"
        )));
    }
    let l2 = ell * ell;
    let dd = (4.0 * (1.0 - l2) / (l2 * l2)).cbrt();
    let sqd = (1.0 + dd).sqrt();
    let a = sqd + (8.0 - 4.0 * dd + 8.0 * (2.0 - l2) / (l2 * sqd)).sqrt() / 2.0;
    let b = (a - 1.0) * (a - 1.0) / 4.0;
    let c = a + b - 1.0;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ell = {ell:e} is too small for f64 weights"
        )));
    }
    let ell_out = (ell * (a + b * l2) / (1.0 + c * l2)).min(1.0);
    Ok(WeightStep {
        a,
        b,
        c,
        ell_in: ell,
        ell_out,
    })
}

/// A sequence of weight steps starting from some `ℓ₀`, i.e. one composed
/// rational function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSchedule {
    pub steps: Vec<WeightStep>,
}

impl WeightSchedule {
    /// Exactly `iters` steps from `ell0`.
    pub fn fixed(ell0: f64, iters: usize) -> Result<Self> {
        let mut steps = Vec::with_capacity(iters);
        let mut ell = ell0;
        for _ in 0..iters {
            let w = halley_weights(ell)?;
            ell = w.ell_out;
            steps.push(w);
        }
        Ok(Self { steps })
    }

    /// Steps from `ell0` until `|ℓ_k − 1| < 5 eps`, at most `max_iters`.
    pub fn until_converged(ell0: f64, eps: f64, max_iters: usize) -> Result<Self> {
        let mut steps = Vec::new();
        let mut ell = ell0;
        if !(ell > 0.0 && ell <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ell must lie in (0, 1], got {ell}"
            )));
        }
        while (ell - 1.0).abs() >= 5.0 * eps {
            if steps.len() == max_iters {
                let mut trace = vec![ell0];
                trace.extend(steps.iter().map(|s: &WeightStep| s.ell_out));
                return Err(Error::NotConverged {
                    iters: max_iters,
                    last_ell: ell,
                    ell_trace: trace,
                });
            }
            let w = halley_weights(ell)?;
            ell = w.ell_out;
            steps.push(w);
        }
        Ok(Self { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `ℓ` after the last step (or `None` for an empty schedule).
    pub fn final_ell(&self) -> Option<f64> {
        self.steps.last().map(|s| s.ell_out)
    }

    /// `[ℓ₀, ℓ₁, ..., ℓ_k]`.
    pub fn ell_trace(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.steps.first().map(|s| s.ell_in).into_iter().collect();
        t.extend(self.steps.iter().map(|s| s.ell_out));
        t
    }

    /// The composed rational function at a scalar.
    pub fn eval(&self, x: f64) -> f64 {
        self.steps.iter().fold(x, |acc, s| s.apply(acc))
    }
}
