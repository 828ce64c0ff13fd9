//! `ggc`: describe fading channels, evaluate metrics, compare channels and
//! reproduce the reference experiments as CSV/JSON data.

mod args;
mod commands;
mod error;
mod output;
mod reproduce;

use args::{Cli, Command};
use clap::Parser;
use error::CliResult;
use std::process::ExitCode;

fn run(cli: Cli) -> CliResult<()> {
    let opts = cli.opts.resolve()?;
    if let Some(n) = opts.threads {
        if n == 0 {
            return Err(error::CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::CliError::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    match &cli.command {
        Command::Describe => commands::describe(&opts),
        Command::Metric(a) => commands::metric(&opts, a),
        Command::Compare(a) => commands::compare(&opts, a),
        Command::Reproduce(a) => reproduce::run(&opts, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
