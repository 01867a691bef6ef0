//! Command-line front end for `qdwh-core`: matrix generation, single solves
//! with JSON reports, CSV sweeps and the invariant checks.

pub mod args;
pub mod bench;
pub mod error;
pub mod gen;
pub mod matfile;
pub mod solve;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use args::Cli;
use args::{Command, Format};
pub use error::{CliError, CliResult};
use solve::Status;

/// Exit code for a solve that found nothing in the requested spectrum.
pub const EXIT_EMPTY: u8 = 2;
pub const EXIT_FAIL: u8 = 1;

/// What a command produced: bytes for `--out` or stdout, and an exit code.
struct Outcome {
    bytes: Vec<u8>,
    out: Option<PathBuf>,
    code: u8,
}

impl Outcome {
    fn new(bytes: Vec<u8>, out: Option<&Path>, code: u8) -> Self {
        Self {
            bytes,
            out: out.map(Path::to_path_buf),
            code,
        }
    }
}

/// Runs `cli`, writing reports to `--out` or `stdout`, and returns the
/// process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<u8> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let done = pool.build()?.install(|| dispatch(cli))?;
    match &done.out {
        Some(p) => fs::write(p, &done.bytes).map_err(|e| CliError::io(p, e))?,
        None => stdout.write_all(&done.bytes)?,
    }
    Ok(done.code)
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Gen(a) => {
            gen::run_gen(a)?;
            Ok(Outcome::new(Vec::new(), None, 0))
        }
        Command::Solve(a) => {
            let report = solve::run_solve(a)?;
            let bytes = match cli.format.unwrap_or(Format::Json) {
                Format::Json => solve::report_json(&report)?,
                Format::Csv => solve::spectrum_csv(&report)?,
            };
            let code = if report.status == Status::EmptySpectrum {
                EXIT_EMPTY
            } else {
                0
            };
            Ok(Outcome::new(bytes, a.out.as_deref(), code))
        }
        Command::Bench(a) => {
            let rows = bench::bench_rows(a)?;
            let bytes = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => bench::rows_csv(&rows)?,
                Format::Json => bench::rows_json(&rows)?,
            };
            Ok(Outcome::new(bytes, a.out.as_deref(), 0))
        }
        Command::Verify(a) => {
            let outcomes = verify::run_verify(a)?;
            let bytes = match cli.format {
                None => verify::outcomes_text(&outcomes),
                Some(Format::Json) => {
                    let mut v = serde_json::to_vec_pretty(&outcomes)?;
                    v.push(b'\n');
                    v
                }
                Some(Format::Csv) => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for o in &outcomes {
                        w.serialize(o)?;
                    }
                    w.into_inner()
                        .map_err(|e| CliError::Format(e.to_string()))?
                }
            };
            let code = if outcomes.iter().all(|o| o.ok()) {
                0
            } else {
                EXIT_FAIL
            };
            Ok(Outcome::new(bytes, a.out.as_deref(), code))
        }
    }
}
