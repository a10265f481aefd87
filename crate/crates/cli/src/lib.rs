//! Command-line front end for `linkmax`: file ingestion, the four
//! subcommands, and the JSON and CSV output schemas.

pub mod args;
mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use args::Cli;
pub use commands::{synthetic_weights, ORACLE_CAP_ENV, SPEEDUP_TARGET};
pub use error::{CliError, ExitKind};

use args::Command;

/// Runs one parsed invocation and returns the process exit status.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Select(a) => commands::select(a),
        Command::Dcov(a) => commands::dcov(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => commands::bench(a),
    }
}
