use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] kk_core::Error),

    #[error("serialising output: {0}")]
    Json(#[from] serde_json::Error),

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = Result<T, CliError>;
