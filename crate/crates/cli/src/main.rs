//! `ptd-spectra`: spectra, wavefunctions, expectation values and figure data
//! for the D-dimensional modified Pöschl-Teller well, as CSV or JSON.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or configuration
//! error, 3 physics error such as an unbound state.

mod args;
mod commands;
mod output;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
