//! `petz-lab`: runs the recovery and non-Markovian dynamics experiments and
//! writes CSV (optionally SVG) results.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical failure.
//! `PETZ_LAB_THREADS` caps the number of worker threads; results do not
//! depend on it.

mod args;
mod commands;
mod error;
mod output;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

const THREADS_VAR: &str = "PETZ_LAB_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got `{raw}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let pool = thread_pool()?;
    pool.install(|| match &cli.command {
        Command::Sweep => commands::sweep(&cli.run),
        Command::Strategies => commands::strategies(&cli.run),
        Command::Backflow => commands::backflow(&cli.run),
        Command::ChoiDistance => commands::choi_distance(&cli.run),
        Command::GeneratorCheck(g) => commands::generator_check(&cli.run, g),
        Command::Channel(c) => commands::channel(&cli.run, c),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("petz-lab: {e}");
            e.exit_code()
        }
    }
}
