use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    /// Malformed or out-of-range input data.
    #[error("{context}: {message}")]
    Data { context: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: pgt_core::Error,
    },
    #[error(transparent)]
    Core(#[from] pgt_core::Error),
}

impl HarnessError {
    pub fn data(context: impl Into<String>, message: impl ToString) -> Self {
        HarnessError::Data { context: context.into(), message: message.to_string() }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    /// Process exit code: 1 usage, 2 bad data or I/O, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Scenario { source, .. } | HarnessError::Core(source) => match source {
                pgt_core::Error::Invariant(_) => 3,
                _ => 2,
            },
            HarnessError::Data { .. } | HarnessError::Io { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
