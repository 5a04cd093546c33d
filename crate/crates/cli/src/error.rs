use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },

    #[error("{path}: row {row}, column {col}: {msg}")]
    Ingest { path: PathBuf, row: usize, col: usize, msg: String },

    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] co3_core::Error),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for unusable input or configuration, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Ingest { .. } | CliError::Input { .. } => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(co3_core::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
