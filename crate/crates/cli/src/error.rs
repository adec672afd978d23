use std::io;
use std::path::PathBuf;

use pseudomode_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("refusing to overwrite {} (use --force)", .0.display())]
    Exists(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("oracle checks failed: {0}")]
    OracleFailed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(
                CoreError::StepSizeUnderflow { .. } | CoreError::TooManySteps { .. } | CoreError::DegenerateRoots,
            )
            | Self::OracleFailed(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
