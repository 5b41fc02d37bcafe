use polyspectra_core::Error;
use thiserror::Error as ThisError;

/// Failure classes with stable process exit codes.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidPolynomial(_) | Error::InvalidWeight(_) => CliError::Parse(msg),
            Error::SingularLeading { .. }
            | Error::NoBoundaryOnRay(_)
            | Error::LeftWindow(_)
            | Error::ConvergedToEigenvalue(_)
            | Error::GradientUndefined(_)
            | Error::NoConvergence { .. }
            | Error::ConstructionFailure { .. }
            | Error::NotFoundWithinBudget { .. } => CliError::Numerical(msg),
            Error::InvalidGrid(_)
            | Error::NegativeRadius(_)
            | Error::NoSecondSingularValue
            | Error::GridTooCoarse { .. }
            | Error::EigenvalueOutsideWindow(_)
            | Error::Precondition(_)
            | Error::PointOnSpectrum(_) => CliError::Precondition(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
