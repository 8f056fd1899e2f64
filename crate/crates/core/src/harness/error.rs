use thiserror::Error;

use crate::Error;

/// Failures of the experiment harness, each mapped to a process exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),

    #[error(transparent)]
    Library(#[from] Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    /// `1` validation, `2` capacity guard, `3` numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. } | HarnessError::Invalid(_) | HarnessError::Io(_) => 1,
            HarnessError::Library(e) => match e {
                Error::Validation(_) | Error::DimensionMismatch { .. } => 1,
                Error::Capacity { .. } => 2,
                Error::Domain(_) | Error::Numerical(_) | Error::DegeneratePosterior(_) => 3,
            },
        }
    }
}
