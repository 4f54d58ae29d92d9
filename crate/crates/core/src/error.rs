use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the tokenization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { path: PathBuf, offset: usize },

    #[error("line {line}: input contains the reserved marker `{marker}`")]
    ReservedMarker { line: usize, marker: &'static str },

    #[error("corpus contains no words")]
    EmptyCorpus,

    #[error("character {ch:?} of word {word:?} is not in the tokenizer alphabet")]
    UnknownCharacter { word: String, ch: char },

    #[error("line {line}, word {word_index}: {source}")]
    InLine {
        line: usize,
        word_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("malformed model file: {0}")]
    ModelFormat(#[from] serde_json::Error),

    #[error("invalid hyperparameters: {0}")]
    Hyperparameter(String),

    #[error(
        "only {available} non-atomic subwords among the top {pool} by frequency, cannot draw {requested}"
    )]
    DropPoolShortfall {
        pool: usize,
        available: usize,
        requested: usize,
    },

    #[error("token {0:?} is not present in the distribution")]
    UnknownToken(String),

    #[error("invalid metric parameter: {0}")]
    Metric(String),

    #[error("unsupported drop: {0}")]
    UnsupportedDrop(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
