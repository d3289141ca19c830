use icpen_core::Error as CoreError;
use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {count} invalid row(s)\n{details}")]
    Validation {
        path: PathBuf,
        count: usize,
        details: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 0 ok, 1 I/O, 2 parse, 3 validation, 4 degenerate support,
    /// 5 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Validation { .. } => 3,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e.root() {
                CoreError::InvalidInput(_) | CoreError::DimensionMismatch { .. } => 3,
                CoreError::EmptySupport => 4,
                _ => 5,
            },
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
