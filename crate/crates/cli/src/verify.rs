//! `qdwh verify`: scalar and subspace invariants with per-property counts.

use serde::Serialize;

use qdwh_core::partial::{choose_shift, pert_bound_trial};
use qdwh_core::polar::{flattening_error, halley_weights, WeightSchedule};
use qdwh_core::{Seed, MACHINE_EPS};

use crate::args::{Property, VerifyArgs};
use crate::error::{CliError, CliResult};

pub const PERT_SLACK: f64 = 1e-12;
pub const FLATTEN_TOL: f64 = 1e-12;
pub const FLATTEN_POINTS: usize = 10_001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub property: &'static str,
    pub passed: u64,
    pub total: u64,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
}

impl PropertyOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {}/{} {} (worst {:.3e})",
            self.property,
            self.passed,
            self.total,
            if self.ok() { "pass" } else { "FAIL" },
            self.worst
        )
    }
}

fn pert_bound(trials: u64) -> CliResult<PropertyOutcome> {
    let mut passed = 0;
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..trials {
        let (kind, pb) = pert_bound_trial(Seed(seed))?;
        worst = worst.max(pb.lhs - pb.rhs);
        if pb.holds(PERT_SLACK) {
            passed += 1;
        } else {
            log::warn!("pert bound fails for seed {seed} ({kind:?}): {pb:?}");
        }
    }
    Ok(PropertyOutcome {
        property: "pert_bound",
        passed,
        total: trials,
        worst,
    })
}

fn flatten(s: Option<f64>, iters: Option<usize>) -> CliResult<PropertyOutcome> {
    let plans: Vec<(f64, usize)> = match (s, iters) {
        (Some(s), Some(i)) => vec![(s, i)],
        (None, Some(i)) => vec![(choose_shift(i)?.s, i)],
        (Some(_), None) => {
            return Err(CliError::Usage(
                "--s needs --iters for the flatten check".into(),
            ))
        }
        (None, None) => [3, 2]
            .into_iter()
            .map(|i| choose_shift(i).map(|p| (p.s, i)))
            .collect::<Result<_, _>>()?,
    };
    let mut passed = 0;
    let mut worst: f64 = 0.0;
    for &(s, i) in &plans {
        let err = flattening_error(s, i, FLATTEN_POINTS)?;
        log::info!("flatten s = {s}, iters = {i}: max error {err:e}");
        worst = worst.max(err);
        if err <= FLATTEN_TOL {
            passed += 1;
        }
    }
    Ok(PropertyOutcome {
        property: "flatten",
        passed,
        total: plans.len() as u64,
        worst,
    })
}

/// `(a, b, c) = (3, 1, 3)` at `ℓ = 1`, and six steps from `ℓ₀ = 1e-15`.
fn weights() -> CliResult<PropertyOutcome> {
    let w = halley_weights(1.0)?;
    let dev = [(w.a, 3.0), (w.b, 1.0), (w.c, 3.0)]
        .iter()
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let fixed_point = dev <= 4.0 * MACHINE_EPS;
    let steps = WeightSchedule::until_converged(1e-15, MACHINE_EPS, 60)?.len();
    let fast = steps <= 6;
    Ok(PropertyOutcome {
        property: "weights",
        passed: u64::from(fixed_point) + u64::from(fast),
        total: 2,
        worst: dev,
    })
}

pub fn run_verify(args: &VerifyArgs) -> CliResult<Vec<PropertyOutcome>> {
    let mut out = Vec::new();
    let all = args.property == Property::All;
    if all || args.property == Property::PertBound {
        out.push(pert_bound(args.trials)?);
    }
    if all || args.property == Property::Flatten {
        out.push(flatten(args.s, args.iters)?);
    }
    if all || args.property == Property::Weights {
        out.push(weights()?);
    }
    Ok(out)
}

pub fn outcomes_text(outcomes: &[PropertyOutcome]) -> Vec<u8> {
    outcomes
        .iter()
        .map(|o| o.line() + "\n")
        .collect::<String>()
        .into_bytes()
}
