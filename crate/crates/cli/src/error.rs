use std::path::PathBuf;

use rmi_core::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: key `{key}`: {message}")]
    Key {
        line: usize,
        key: String,
        message: String,
    },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Invalid(#[source] SolverError),

    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 3 for solver
    /// failures, 4 for file-system and file-format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Key { .. }
            | CliError::Syntax { .. }
            | CliError::Invalid(_)
            | CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io { .. } | CliError::Format { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
