//! Command-line front end: scenario files in, bound tables and verified
//! feasibility reports out.
//!
//! Exit statuses: 0 success, 1 usage or I/O error, 2 a modelling assumption
//! does not hold for the input, 3 the requested bound does not apply, 4 a
//! bound failed verification.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use cli::{Cli, Command};
use error::exit;

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Metrics(a) => commands::metrics(a),
        Command::Bound(a) => commands::bound(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sdpfeas: {e}");
            e.exit_code()
        }
    }
}
