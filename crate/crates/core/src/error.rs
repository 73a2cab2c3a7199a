use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants double as error classes for the command line: everything
/// except [`Error::Io`] is a usage or configuration problem and maps to exit
/// code 2, while I/O failures are runtime failures (exit code 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("stage {index} ({stage}): {source}")]
    Stage {
        index: usize,
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach a file path to an error.
    pub fn at(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping stage and file annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } | Error::File { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code for this error: 1 for runtime (I/O) failures, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
