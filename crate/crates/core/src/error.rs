use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated a structural or semantic precondition.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A scalar function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration would exceed its work guard.
    #[error("capacity exceeded: {what} needs {required} items (limit {limit})")]
    Capacity {
        what: String,
        required: f64,
        limit: f64,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Every grid point has zero posterior weight.
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
