use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Model(#[from] gauss_bs_core::Error),
}

impl CliError {
    /// Process exit status; 1 is reserved for property violations.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
