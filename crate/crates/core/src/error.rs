use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell index {index} outside 1..={n_cells}")]
    CellIndex { index: usize, n_cells: usize },

    #[error("strategy exhausted: {needed} terms needed, {available} available")]
    ExhaustedStrategy { needed: usize, available: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient capacity: {needed} carriers needed, {available} available")]
    Capacity { needed: usize, available: usize },

    #[error("media error: {0}")]
    Media(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors caused by unreadable or incompatible inputs, as opposed to bad parameters.
    pub fn is_media_or_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse { .. } | Error::Media(_) | Error::Dimension { .. })
    }
}
