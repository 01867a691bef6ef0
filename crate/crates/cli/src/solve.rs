//! `qdwh solve`: one solver, one JSON report.

use std::time::Instant;

use serde::Serialize;

use qdwh_core::fullsolve::{qdwh_eig_full, qdwh_svd_full, DEFAULT_BASE_SIZE};
use qdwh_core::matgen::{
    accuracy_report, flop_estimate, AccuracyReport, FlopEstimate, FlopKind, ResidualPairing,
};
use qdwh_core::partial::{choose_shift, qdwh_partial_eig, qdwh_partial_svd};
use qdwh_core::polar::{predicted_schedule, predicted_step_mix, PolarConfig};
use qdwh_core::{DenseMatrix, Error, Seed};

use crate::args::{SolveArgs, Solver};
use crate::error::{CliError, CliResult};
use crate::matfile;

pub const SOLVE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    EmptySpectrum,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveParams {
    pub iters: Option<usize>,
    pub shift: Option<f64>,
    pub s: Option<f64>,
    pub tol: f64,
    pub seed: u64,
    pub randomize: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub solver: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub params: SolveParams,
    pub status: Status,
    /// Ascending eigenvalues or descending singular values.
    pub spectrum: Vec<f64>,
    pub k: usize,
    pub subspace_size: Option<usize>,
    pub rank_index: Option<usize>,
    /// Norm estimate the input was scaled by.
    pub scale: Option<f64>,
    pub ell_trace: Vec<f64>,
    pub iters_qr: usize,
    pub iters_chol: usize,
    pub accuracy: Option<AccuracyReport>,
    pub flops: Option<FlopEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

impl SolveReport {
    fn empty(solver: Solver, a: &DenseMatrix, params: SolveParams) -> Self {
        Self {
            schema_version: SOLVE_SCHEMA_VERSION,
            solver: solver.name(),
            rows: a.rows(),
            cols: a.cols(),
            params,
            status: Status::EmptySpectrum,
            spectrum: Vec::new(),
            k: 0,
            subspace_size: None,
            rank_index: None,
            scale: None,
            ell_trace: Vec::new(),
            iters_qr: 0,
            iters_chol: 0,
            accuracy: None,
            flops: None,
            wall_seconds: None,
        }
    }
}

fn reference(truth: Option<&[f64]>, k: usize, descending: bool) -> Option<Vec<f64>> {
    let t = truth?;
    if t.len() < k {
        log::warn!(
            "reference spectrum has {} values, {k} computed; value_err skipped",
            t.len()
        );
        return None;
    }
    let mut sorted = t.to_vec();
    sorted.sort_by(f64::total_cmp);
    if descending {
        sorted.reverse();
    }
    sorted.truncate(k);
    Some(sorted)
}

fn load_truth(args: &SolveArgs) -> CliResult<Option<Vec<f64>>> {
    match &args.truth {
        Some(p) => Ok(Some(matfile::read_spectrum(p)?)),
        None => {
            let side = matfile::sidecar_path(&args.input);
            if side.is_file() {
                Ok(Some(matfile::read_spectrum(&side)?))
            } else {
                Ok(None)
            }
        }
    }
}

/// Runs the solver on `a`. `EmptySpectrum` is reported through `status`,
/// not as an error.
pub fn solve_matrix(
    a: &DenseMatrix,
    args: &SolveArgs,
    truth: Option<&[f64]>,
) -> CliResult<SolveReport> {
    let mut params = SolveParams {
        iters: None,
        shift: None,
        s: None,
        tol: args.tol,
        seed: args.seed,
        randomize: args.randomize,
    };
    let seed = Seed(args.seed);
    let n = a.cols();
    let report = match args.solver {
        Solver::PartialEig => {
            if args.s.is_some() {
                return Err(CliError::Usage(
                    "--s applies to partial-svd; partial-eig takes --iters".into(),
                ));
            }
            let plan = choose_shift(args.iters)?;
            params.iters = Some(plan.qdwh_iters);
            params.shift = Some(plan.s);
            let r = match qdwh_partial_eig(a, &plan, args.randomize, args.tol, seed) {
                Err(Error::EmptySpectrum) => return Ok(SolveReport::empty(args.solver, a, params)),
                r => r?,
            };
            let want = reference(truth, r.k(), false);
            let acc = accuracy_report(
                a,
                &r.v,
                &r.lambda_minus,
                &r.v,
                want.as_deref(),
                ResidualPairing::Standard,
            )?;
            let d = &r.diagnostics;
            let flops = flop_estimate(
                FlopKind::PartialEig,
                n,
                r.subspace_size,
                d.iters_qr,
                d.iters_chol,
            )?;
            SolveReport {
                status: Status::Ok,
                k: r.k(),
                spectrum: r.lambda_minus,
                subspace_size: Some(r.subspace_size),
                rank_index: Some(r.rank_index),
                scale: Some(r.mu.abs()),
                ell_trace: d.ell_trace.clone(),
                iters_qr: d.iters_qr,
                iters_chol: d.iters_chol,
                accuracy: Some(acc),
                flops: Some(flops),
                ..SolveReport::empty(args.solver, a, params)
            }
        }
        Solver::PartialSvd => {
            let s = args.s.unwrap_or(0.1);
            params.s = Some(s);
            let r = match qdwh_partial_svd(a, s, args.tol, args.randomize, seed) {
                Err(Error::EmptySpectrum) => return Ok(SolveReport::empty(args.solver, a, params)),
                r => r?,
            };
            let want = reference(truth, r.k(), true);
            let acc = accuracy_report(
                a,
                &r.u1,
                &r.sigma1,
                &r.v1,
                want.as_deref(),
                ResidualPairing::Standard,
            )?;
            let d = &r.diagnostics;
            let flops = flop_estimate(
                FlopKind::PartialSvd,
                n,
                r.subspace_size,
                d.iters_qr,
                d.iters_chol,
            )?;
            SolveReport {
                status: Status::Ok,
                k: r.k(),
                spectrum: r.sigma1,
                subspace_size: Some(r.subspace_size),
                rank_index: Some(r.rank_index),
                scale: Some(r.alpha),
                ell_trace: d.ell_trace.clone(),
                iters_qr: d.iters_qr,
                iters_chol: d.iters_chol,
                accuracy: Some(acc),
                flops: Some(flops),
                ..SolveReport::empty(args.solver, a, params)
            }
        }
        Solver::FullEig => {
            let r = qdwh_eig_full(a, DEFAULT_BASE_SIZE)?;
            let want = reference(truth, n, false);
            let acc = accuracy_report(
                a,
                &r.vectors,
                &r.values,
                &r.vectors,
                want.as_deref(),
                ResidualPairing::Standard,
            )?;
            full_report(args.solver, a, params, r.values, acc, FlopKind::QdwhEigFull)?
        }
        Solver::FullSvd => {
            let r = qdwh_svd_full(a)?;
            let want = reference(truth, n, true);
            let acc = accuracy_report(
                a,
                &r.u,
                &r.sigma,
                &r.v,
                want.as_deref(),
                ResidualPairing::Standard,
            )?;
            full_report(args.solver, a, params, r.sigma, acc, FlopKind::QdwhSvdFull)?
        }
    };
    Ok(report)
}

/// The full solvers do not expose per-call iteration counts, so the report
/// carries the top-level polar schedule.
fn full_report(
    solver: Solver,
    a: &DenseMatrix,
    params: SolveParams,
    spectrum: Vec<f64>,
    acc: AccuracyReport,
    kind: FlopKind,
) -> CliResult<SolveReport> {
    let cfg = PolarConfig::default();
    let (iters_qr, iters_chol) = predicted_step_mix(&cfg)?;
    Ok(SolveReport {
        status: Status::Ok,
        k: spectrum.len(),
        spectrum,
        ell_trace: predicted_schedule(&cfg)?.ell_trace(),
        iters_qr,
        iters_chol,
        accuracy: Some(acc),
        flops: Some(flop_estimate(kind, a.cols(), 0, iters_qr, iters_chol)?),
        ..SolveReport::empty(solver, a, params)
    })
}

pub fn run_solve(args: &SolveArgs) -> CliResult<SolveReport> {
    let a = matfile::read_matrix(&args.input)?;
    let truth = load_truth(args)?;
    let start = Instant::now();
    let mut report = solve_matrix(&a, args, truth.as_deref())?;
    if args.timing {
        report.wall_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// `index,value` rendering of the spectrum for `--format csv`.
pub fn spectrum_csv(report: &SolveReport) -> CliResult<Vec<u8>> {
    matfile::spectrum_csv(&report.spectrum)
}

pub fn report_json(report: &SolveReport) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(report)?;
    out.push(b'\n');
    Ok(out)
}
