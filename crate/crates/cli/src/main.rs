use std::process::ExitCode;

use clap::Parser;

use qdwh_cli::{execute, Cli, EXIT_FAIL};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qdwh: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
