use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qdwh",
    version,
    about = "QDWH polar, partial eigen and partial SVD solvers"
)]
pub struct Cli {
    /// Worker threads; 1 gives bitwise-reproducible output.
    #[arg(long, env = "QDWH_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Output format. Defaults: json for `solve`, csv for `bench`, text lines for `verify`.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded test matrix and its planted spectrum.
    Gen(GenArgs),
    /// Run one solver on a matrix file.
    Solve(SolveArgs),
    /// Sweep solvers over sizes and thresholds.
    Bench(BenchArgs),
    /// Check the scalar and subspace invariants.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Symmetric, `k` negative eigenvalues.
    Eig,
    /// Geometric singular values `2^{-i}`.
    Svd,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// Negative eigenvalues for `--kind eig`; defaults to round(0.1 n).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix path; the spectrum goes to `<out>.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    PartialEig,
    PartialSvd,
    FullEig,
    FullSvd,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::PartialEig => "partial-eig",
            Solver::PartialSvd => "partial-svd",
            Solver::FullEig => "full-eig",
            Solver::FullSvd => "full-svd",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(value_enum)]
    pub solver: Solver,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// QDWH steps for partial-eig (2 or 3).
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    /// Relative threshold for partial-svd.
    #[arg(long)]
    pub s: Option<f64>,
    /// `|R_ii|` cutoff for the subspace size.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiply by a Gaussian matrix before the QR.
    #[arg(long)]
    pub randomize: bool,
    /// Reference spectrum for `value_err`; defaults to `<in>.csv` when present.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-1, 1e-2, 1e-3, 1e-4])]
    pub s: Vec<f64>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        num_args = 1..,
        default_values_t = [BenchSolver::PartialSvd, BenchSolver::PartialEig]
    )]
    pub solvers: Vec<BenchSolver>,
    /// Negative eigenvalues as a fraction of n.
    #[arg(long, default_value_t = 0.1)]
    pub k_frac: f64,
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchSolver {
    PartialSvd,
    PartialEig,
    FullEig,
    FullSvd,
    StdEig,
    StdSvd,
}

impl BenchSolver {
    pub fn name(self) -> &'static str {
        match self {
            BenchSolver::PartialSvd => "partial-svd",
            BenchSolver::PartialEig => "partial-eig",
            BenchSolver::FullEig => "full-eig",
            BenchSolver::FullSvd => "full-svd",
            BenchSolver::StdEig => "std-eig",
            BenchSolver::StdSvd => "std-svd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    All,
    PertBound,
    Flatten,
    Weights,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Property::All)]
    pub property: Property,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Shift for `flatten`; without it both tabulated plans are checked.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
