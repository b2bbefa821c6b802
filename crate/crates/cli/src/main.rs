//! `rrbf`: fit, evaluate and diagnose RBF interpolants from the command line.
//!
//! Exit codes: 0 success, 2 solver failure, 3 configuration error, 4 failed
//! rows in an experiment report. Errors are printed as one line,
//! `error:<field>: <message>`.

mod args;
mod commands;
mod failure;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use failure::{Failure, EXIT_CONFIG};

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("RBF_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Failure::config(
            "RBF_THREADS",
            format!("expected a positive integer, got `{v}`"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::config("RBF_THREADS", e.to_string()))
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Interp(a) => commands::interp(a),
        Command::Lebesgue(a) => commands::lebesgue_cmd(a),
        Command::Pum(a) => commands::pum(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Kernels => commands::kernels(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error:args: {}", first.trim_start_matches("error: "));
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.code as u8)
        }
    }
}
