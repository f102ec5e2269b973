use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An angle, frequency or other argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("invalid sweep axis `{0}` (expected gain, phase or delay)")]
    InvalidAxis(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("failed to read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit status for the command line tool: 2 for anything caused
    /// by the configuration, 3 for invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Config(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptyInput(_)
            | Error::UnknownExperiment(_)
            | Error::InvalidAxis(_)
            | Error::ConfigRead { .. } => 2,
            Error::InvariantViolation(_) => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
