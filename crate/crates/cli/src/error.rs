use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Everything that stops a command before it can report a result.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot parse {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numeric(#[from] wkl_core::Error),

    #[error("cannot write {target}: {source}")]
    Write { target: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Numeric(wkl_core::Error::NotPositiveDefinite(_)) => 3,
            Self::Write { .. } => 4,
            _ => 2,
        }
    }

    pub(crate) fn write(target: impl Into<String>, source: io::Error) -> Self {
        Self::Write {
            target: target.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
