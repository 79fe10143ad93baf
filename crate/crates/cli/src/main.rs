//! `toric-codes`: batch front end for parameterized evaluation codes.
//!
//! Exit codes: 0 on success, 2 for bad input or an exceeded cap, 3 when a
//! closed formula disagrees with its oracle or a bound is violated.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Output};

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Params(a) => commands::params(a),
        Command::Table(a) => commands::table(a),
        Command::Genmat(a) => commands::genmat(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Hilbert(a) => commands::hilbert(a),
        Command::TorusCheck(a) => commands::torus_check(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn out_path(cli: &Cli) -> Option<&std::path::Path> {
    let common = match &cli.command {
        Command::Params(a) | Command::Table(a) | Command::Genmat(a) | Command::Kernel(a) => &a.common,
        Command::Hilbert(a) => &a.common,
        Command::TorusCheck(a) => &a.set.common,
        Command::Bounds(a) => &a.common,
        Command::Verify(a) => &a.common,
    };
    common.out.as_deref()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match out_path(&cli) {
        Some(path) => std::fs::write(path, &output.body),
        None => std::io::stdout().lock().write_all(output.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(output.code as u8)
}
