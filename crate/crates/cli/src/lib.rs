//! Library side of the `confball` command: configuration, input parsing and
//! the four subcommands, each rendering its output to a string.

pub mod commands;
pub mod config;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or input data.
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {reason}")]
    Input { path: String, line: usize, reason: String },
    /// A requested check failed; the report was still produced.
    #[error("{0}")]
    CheckFailed(String),
    #[error(transparent)]
    Library(#[from] confball::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}

pub use commands::{run, Cli, Command};
