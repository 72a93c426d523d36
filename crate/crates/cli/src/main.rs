//! `lcfn`: command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or
//! configuration error, 3 numerical non-convergence or evaluation failure.
//! `LCFN_THREADS` caps the worker threads used by the harnesses.

mod args;
mod commands;
mod error;
mod report;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let spec = commands::quadrature_spec(&cli.quadrature)?;
    let report = commands::run(&cli.command, &spec)?;
    let rendered = report.render(cli.command.name(), cli.output.format)?;
    match &cli.output.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(report.passed)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("LCFN_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("LCFN_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))
}
