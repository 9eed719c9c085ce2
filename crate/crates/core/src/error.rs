use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pack incomplete: {0}")]
    PackIncomplete(String),

    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },

    #[error("duplicate entries: {}", .0.join("; "))]
    Duplicates(Vec<String>),

    #[error("no such allomorph group: {0}")]
    NoSuchAllomorphGroup(String),

    #[error("pack failed validation: {0}")]
    InvalidPack(String),

    #[error("empty word")]
    EmptyWord,

    #[error("unsyllabifiable: {0}")]
    Unsyllabifiable(String),

    #[error("invalid token id {0}")]
    InvalidTokenId(u32),

    #[error("target_size too small: at least {minimum} entries are required")]
    TargetTooSmall { minimum: usize },

    #[error("vocab_size too small: alphabet has {alphabet} symbols")]
    VocabSizeTooSmall { alphabet: usize },

    #[error("vocabulary and pack disagree: {0}")]
    Mismatch(String),

    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: u64 },

    #[error("invalid strata: {0}")]
    InvalidStrata(String),

    #[error("insufficient types for stratum {stratum}: need {needed}, have {available}")]
    InsufficientTypes {
        stratum: String,
        needed: usize,
        available: usize,
    },

    #[error("alignment violation on word {word:?}: tokens {tokens:?}")]
    AlignmentViolation { word: String, tokens: Vec<String> },

    #[error("empty word list")]
    EmptyWordList,

    #[error("external tokenizer: {0}")]
    External(String),

    #[error("{path}: {cause}")]
    Io { path: PathBuf, cause: std::io::Error },

    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, cause: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            cause,
        }
    }

    pub(crate) fn malformed(file: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }
}
