use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure at iteration {iteration}: {context}")]
    NumericalFailure { iteration: u64, context: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Attaches an iteration number to a numerical failure raised deep inside a sweep.
    pub(crate) fn at_iteration(self, iteration: u64) -> Self {
        match self {
            Error::NumericalFailure { context, .. } => Error::NumericalFailure { iteration, context },
            other => other,
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
