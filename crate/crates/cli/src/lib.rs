//! File formats and subcommands of the `ca-lab` command-line tool.

pub mod commands;
pub mod error;
pub mod pbm;
pub mod rulefile;
pub mod tilefile;

pub use commands::run;
pub use error::{CliError, CliResult};
