//! Failures of a CLI run and their exit codes.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or a malformed JSON argument.
    #[error("{0}")]
    Usage(String),

    /// A referenced file could not be read or written.
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// The input file was read but its contents are not a valid signal.
    #[error("{0}")]
    Ingest(String),

    #[error(transparent)]
    Core(#[from] zygmund_core::Error),
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }

    /// Machine-readable code for the error object of a report.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Ingest(_) => "ingest",
            CliError::Core(e) => e.code(),
        }
    }

    /// 1 for invocation problems, 2 for rejected data or numerics.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Ingest(_) | CliError::Core(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
