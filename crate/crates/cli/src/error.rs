use std::io;
use std::path::Path;

use bitchaos::generators::SeedError;
use bitchaos::period::PeriodError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid seed: {0}")]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error("{path}: byte {offset}: {reason}")]
    Parse {
        path: String,
        offset: usize,
        reason: String,
    },
    #[error("{path}: {reason}")]
    Json { path: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// Process exit code: 1 for usage and validation problems, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            _ => 1,
        }
    }

    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn json(path: impl AsRef<Path>, err: serde_json::Error) -> Self {
        CliError::Json {
            path: path.as_ref().display().to_string(),
            reason: err.to_string(),
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A statistical gate was not met.
    GateFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::GateFailed => 2,
        }
    }
}
