//! Command-line front end: bit file formats, run manifests, and the
//! `gen`, `nist`, `period`, `reproduce` and `rerun` commands.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 statistical gate
//! not met, 3 I/O error.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod manifest;
pub mod reproduce;

pub use app::{run, Cli};
pub use error::{CliError, Outcome};

use std::ffi::OsString;

use clap::Parser;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
