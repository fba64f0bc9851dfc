//! Command-line front end for the `assouad` crate: one binary, one
//! subcommand per pipeline, plus the `verify-paper` reproduction suite.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod verify;

pub use config::{Command, RunConfig};
pub use error::CliError;
pub use run::{run, Outcome};
