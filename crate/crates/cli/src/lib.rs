//! Batch front end for the qu0 kernel: proof scripts, model files, the
//! machine report, and the subcommands behind the `qu0` binary.

pub mod commands;
pub mod error;
pub mod model;
pub mod report;
pub mod script;

pub use error::CliError;
