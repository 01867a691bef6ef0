use qdwh_core::matgen::{gen_svd_test, gen_sym_eig_test};
use qdwh_core::Seed;

use crate::args::{GenArgs, GenKind};
use crate::error::{CliError, CliResult};
use crate::matfile;

/// `round(frac · n)`, at least one.
pub fn default_k(n: usize, frac: f64) -> usize {
    ((frac * n as f64).round() as usize).max(1)
}

pub fn run_gen(args: &GenArgs) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let (a, spectrum) = match args.kind {
        GenKind::Eig => gen_sym_eig_test(
            args.n,
            args.k.unwrap_or_else(|| default_k(args.n, 0.1)),
            Seed(args.seed),
        )?,
        GenKind::Svd => {
            if args.k.is_some() {
                return Err(CliError::Usage("--k only applies to --kind eig".into()));
            }
            gen_svd_test(args.n, Seed(args.seed))?
        }
    };
    matfile::write_matrix(&args.out, &a)?;
    let side = matfile::sidecar_path(&args.out);
    matfile::write_spectrum(&side, &spectrum)?;
    log::info!("wrote {} and {}", args.out.display(), side.display());
    Ok(())
}
