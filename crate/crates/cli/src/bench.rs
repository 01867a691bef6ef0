//! `qdwh bench`: one CSV row per (solver, n, threshold).

use std::time::Instant;

use serde::Serialize;

use qdwh_core::fullsolve::{qdwh_eig_full, qdwh_svd_full, DEFAULT_BASE_SIZE};
use qdwh_core::kernels::{svd_dense, sym_eig_dense};
use qdwh_core::matgen::{
    accuracy_report, flop_estimate, gen_svd_test, gen_sym_eig_test, FlopKind, ResidualPairing,
};
use qdwh_core::partial::{choose_shift, qdwh_partial_eig, qdwh_partial_svd, DEFAULT_RANK_TOL};
use qdwh_core::polar::{predicted_step_mix, PolarConfig};
use qdwh_core::{DenseMatrix, Error, Seed};

use crate::args::{BenchArgs, BenchSolver};
use crate::error::{CliError, CliResult};
use crate::gen::default_k;

pub const BENCH_HEADER: [&str; 9] = [
    "solver",
    "n",
    "k_or_s",
    "subspace_size",
    "value_err",
    "orth",
    "resid",
    "flops_model",
    "seconds",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub solver: &'static str,
    pub n: usize,
    /// `k` for eigen rows, `s` for partial-svd, empty for full SVD.
    pub k_or_s: Option<f64>,
    pub subspace_size: Option<usize>,
    pub value_err: Option<f64>,
    pub orth: Option<f64>,
    pub resid: Option<f64>,
    pub flops_model: f64,
    pub seconds: Option<f64>,
}

struct Problem {
    a: DenseMatrix,
    /// Ascending for eig, descending for svd.
    spectrum: Vec<f64>,
}

fn head(v: &[f64], k: usize) -> Option<&[f64]> {
    v.get(..k)
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, timing.then(|| start.elapsed().as_secs_f64()))
}

fn row(
    solver: BenchSolver,
    n: usize,
    k_or_s: Option<f64>,
    flops_model: f64,
    seconds: Option<f64>,
) -> BenchRow {
    BenchRow {
        solver: solver.name(),
        n,
        k_or_s,
        subspace_size: None,
        value_err: None,
        orth: None,
        resid: None,
        flops_model,
        seconds,
    }
}

pub fn bench_rows(args: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    if !(args.k_frac > 0.0 && args.k_frac < 1.0) {
        return Err(CliError::Usage(format!(
            "--k-frac must lie in (0, 1), got {}",
            args.k_frac
        )));
    }
    if args.n.contains(&0) {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    let plan = choose_shift(args.iters)?;
    let (full_qr, full_chol) = predicted_step_mix(&PolarConfig::default())?;
    let seed = Seed(args.seed);
    let mut rows = Vec::new();

    for &n in &args.n {
        let k = default_k(n, args.k_frac);
        let eig = || -> CliResult<Problem> {
            let (a, spectrum) = gen_sym_eig_test(n, k, seed)?;
            Ok(Problem { a, spectrum })
        };
        let svd = || -> CliResult<Problem> {
            let (a, spectrum) = gen_svd_test(n, seed)?;
            Ok(Problem { a, spectrum })
        };
        let (mut eig_p, mut svd_p) = (None, None);

        for &solver in &args.solvers {
            match solver {
                BenchSolver::PartialSvd => {
                    let p = match &svd_p {
                        Some(p) => p,
                        None => svd_p.insert(svd()?),
                    };
                    for &s in &args.s {
                        let (r, secs) = timed(args.timing, || {
                            qdwh_partial_svd(&p.a, s, DEFAULT_RANK_TOL, false, seed)
                        });
                        let r = match r {
                            Err(Error::EmptySpectrum) => {
                                rows.push(row(solver, n, Some(s), 0.0, secs));
                                continue;
                            }
                            r => r?,
                        };
                        let acc = accuracy_report(
                            &p.a,
                            &r.u1,
                            &r.sigma1,
                            &r.v1,
                            head(&p.spectrum, r.k()),
                            ResidualPairing::Standard,
                        )?;
                        let d = &r.diagnostics;
                        let fl = flop_estimate(
                            FlopKind::PartialSvd,
                            n,
                            r.subspace_size,
                            d.iters_qr,
                            d.iters_chol,
                        )?;
                        rows.push(BenchRow {
                            subspace_size: Some(r.subspace_size),
                            value_err: acc.value_err,
                            orth: Some(acc.orth()),
                            resid: Some(acc.resid()),
                            ..row(solver, n, Some(s), fl.total, secs)
                        });
                    }
                }
                BenchSolver::PartialEig => {
                    let p = match &eig_p {
                        Some(p) => p,
                        None => eig_p.insert(eig()?),
                    };
                    let (r, secs) = timed(args.timing, || {
                        qdwh_partial_eig(&p.a, &plan, false, DEFAULT_RANK_TOL, seed)
                    });
                    let r = r?;
                    let acc = accuracy_report(
                        &p.a,
                        &r.v,
                        &r.lambda_minus,
                        &r.v,
                        head(&p.spectrum, r.k()),
                        ResidualPairing::Standard,
                    )?;
                    let d = &r.diagnostics;
                    let fl = flop_estimate(
                        FlopKind::PartialEig,
                        n,
                        r.subspace_size,
                        d.iters_qr,
                        d.iters_chol,
                    )?;
                    rows.push(BenchRow {
                        subspace_size: Some(r.subspace_size),
                        value_err: acc.value_err,
                        orth: Some(acc.orth()),
                        resid: Some(acc.resid()),
                        ..row(solver, n, Some(k as f64), fl.total, secs)
                    });
                }
                BenchSolver::FullEig | BenchSolver::StdEig => {
                    let p = match &eig_p {
                        Some(p) => p,
                        None => eig_p.insert(eig()?),
                    };
                    let ((values, vectors), secs) = if solver == BenchSolver::FullEig {
                        let (r, secs) =
                            timed(args.timing, || qdwh_eig_full(&p.a, DEFAULT_BASE_SIZE));
                        let r = r?;
                        ((r.values, r.vectors), secs)
                    } else {
                        let (r, secs) = timed(args.timing, || sym_eig_dense(&p.a));
                        let r = r?;
                        ((r.values, r.vectors), secs)
                    };
                    let acc = accuracy_report(
                        &p.a,
                        &vectors,
                        &values,
                        &vectors,
                        Some(&p.spectrum),
                        ResidualPairing::Standard,
                    )?;
                    let fl = if solver == BenchSolver::FullEig {
                        flop_estimate(FlopKind::QdwhEigFull, n, 0, full_qr, full_chol)?
                    } else {
                        flop_estimate(FlopKind::StdEig, n, 0, 0, 0)?
                    };
                    rows.push(BenchRow {
                        subspace_size: Some(n),
                        value_err: acc.value_err,
                        orth: Some(acc.orth()),
                        resid: Some(acc.resid()),
                        ..row(solver, n, Some(k as f64), fl.total, secs)
                    });
                }
                BenchSolver::FullSvd | BenchSolver::StdSvd => {
                    let p = match &svd_p {
                        Some(p) => p,
                        None => svd_p.insert(svd()?),
                    };
                    let ((u, sigma, v), secs) = if solver == BenchSolver::FullSvd {
                        let (r, secs) = timed(args.timing, || qdwh_svd_full(&p.a));
                        let r = r?;
                        ((r.u, r.sigma, r.v), secs)
                    } else {
                        let (r, secs) = timed(args.timing, || svd_dense(&p.a));
                        let r = r?;
                        ((r.u, r.sigma, r.v), secs)
                    };
                    let acc = accuracy_report(
                        &p.a,
                        &u,
                        &sigma,
                        &v,
                        Some(&p.spectrum),
                        ResidualPairing::Standard,
                    )?;
                    let fl = if solver == BenchSolver::FullSvd {
                        flop_estimate(FlopKind::QdwhSvdFull, n, 0, full_qr, full_chol)?
                    } else {
                        flop_estimate(FlopKind::StdSvd, n, 0, 0, 0)?
                    };
                    rows.push(BenchRow {
                        subspace_size: Some(n),
                        value_err: acc.value_err,
                        orth: Some(acc.orth()),
                        resid: Some(acc.resid()),
                        ..row(solver, n, None, fl.total, secs)
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn rows_csv(rows: &[BenchRow]) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(BENCH_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Format(e.to_string()))
}

pub fn rows_json(rows: &[BenchRow]) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(rows)?;
    out.push(b'\n');
    Ok(out)
}
