//! Error type of the front end, with the documented exit-code mapping:
//! 1 property failure, 2 validation, 3 dimension mismatch, 4 I/O,
//! 5 optimizer non-convergence.

use skewcorr_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::DimensionMismatch { .. }
                | CoreError::ShapeMismatch { .. }
                | CoreError::NotSquare { .. } => 3,
                CoreError::OptimizerNoConvergence => 5,
                _ => 2,
            },
            CliError::Io(_) | CliError::Parse(_) => 4,
            CliError::Usage(_) => 2,
        }
    }
}
