use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Parse(_) | CliError::Read { .. } | CliError::Write { .. } => 2,
            CliError::Validation(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<conemid::Error> for CliError {
    fn from(e: conemid::Error) -> Self {
        use conemid::Error as E;
        match e {
            E::NotInterior { .. }
            | E::DimensionMismatch { .. }
            | E::AlgebraMismatch { .. }
            | E::NegativeCoordinate { .. } => CliError::Validation(e.to_string()),
            E::InvalidAlgebra(_) => CliError::Parse(e.to_string()),
            E::EpsilonFloor { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}
