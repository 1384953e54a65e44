//! Command implementations behind the `qantenna` binary.
//!
//! Everything the binary does is callable as a library function so that
//! integration tests (and the acceptance suite) can drive runs and inspect
//! the produced files directly.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run_command, run_preset, CliError, Command};
pub use config::{preset_params, OmegaGrid, OutputFormat, PresetId, RunConfig, ThetaGrid};
pub use output::{read_csv, Table};

/// Process exit code for an error, per the documented convention:
/// 1 for usage/configuration/IO problems, 2 for numerical failures.
pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Config(_) | CliError::Io(_) => 1,
        CliError::Numerical(_) => 2,
    }
}
