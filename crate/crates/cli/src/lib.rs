//! Command implementations for the `dimwit` binary.
//!
//! Each command returns its complete standard-output text; the binary prints
//! it once and maps errors to exit codes (2 for usage and validation, 3 for
//! I/O).

pub mod commands;
pub mod files;
pub mod format;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<dimwit::Error> for CliError {
    fn from(e: dimwit::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
