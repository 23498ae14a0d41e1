use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Lab(#[from] causal_channel::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("bad manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    /// 2 for bad input, 3 when the exact-mode guard trips, 4 for I/O.
    pub fn exit_code(&self) -> ExitCode {
        use causal_channel::Error as E;
        ExitCode::from(match self {
            CliError::Io { .. } | CliError::Lab(E::Io(_)) => 4,
            CliError::Lab(E::Capacity { .. }) => 3,
            _ => 2,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
