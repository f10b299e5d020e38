use std::process::ExitCode;

use motsheaf_core::Error;

/// Failure of a run, classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed arguments, configuration or class (exit 1).
    #[error("{0}")]
    Parse(String),
    /// A hypothesis of the requested computation fails (exit 2).
    #[error("{0}")]
    Inapplicable(String),
    /// An internal consistency check failed (exit 3).
    #[error("{0}")]
    Invariant(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Inapplicable(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::DimensionMismatch { .. }
            | Error::UnsupportedSurface(_)
            | Error::ZeroClass
            | Error::NotEffective(_)
            | Error::CapExceeded { .. } => CliError::Parse(msg),
            Error::Precondition(_) | Error::Inapplicable(_) | Error::EmptyCandidates { .. } => {
                CliError::Inapplicable(msg)
            }
            Error::OutOfRange { .. } | Error::TruncationMismatch(..) | Error::Invariant(_) => {
                CliError::Invariant(msg)
            }
        }
    }
}
