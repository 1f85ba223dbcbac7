use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config file contents, or parameter constraint
    /// violations. Exit code 1.
    #[error("configuration error: {0}")]
    Config(String),

    /// Reading or writing a file failed. Exit code 2.
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io { .. } => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<bubble_core::ModelError> for CliError {
    fn from(e: bubble_core::ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<bubble_core::AnalysisError> for CliError {
    fn from(e: bubble_core::AnalysisError) -> Self {
        CliError::Config(e.to_string())
    }
}
