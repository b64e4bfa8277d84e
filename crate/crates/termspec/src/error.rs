//! Error type shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by corpus ingestion, scoring, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not valid UTF-8")]
    InvalidUtf8 { path: PathBuf },

    #[error("{path}:{line}: malformed JSONL record: {reason}")]
    MalformedJsonl {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("duplicate document id {id:?}{}", match .line { Some(l) => format!(" (line {l})"), None => String::new() })]
    DuplicateDocId { id: String, line: Option<usize> },

    #[error("no documents found in {path}")]
    NoDocuments { path: PathBuf },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("term id {id} out of range (vocabulary size {len})")]
    TermOutOfRange { id: u32, len: usize },

    #[error("unknown term {term:?}{}", match .suggestion { Some(s) => format!("; did you mean {s:?}?"), None => String::new() })]
    UnknownTerm {
        term: String,
        suggestion: Option<String>,
    },

    #[error("{path}:{line}: malformed golden-label line: {reason}")]
    MalformedGold {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("term {term:?} has no golden label")]
    UnlabeledTerm { term: String },

    #[error("ranked lists cover different term sets")]
    MismatchedTermSets,

    #[error("need at least one example of each class")]
    SingleClass,

    #[error("invalid fold count {k} for {examples} examples")]
    InvalidFolds { k: usize, examples: usize },

    #[error("n = {n} out of range 1..={max}")]
    RankCutoffOutOfRange { n: usize, max: usize },

    #[error("{path}: bad cache file: {reason}")]
    CacheFormat { path: PathBuf, reason: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
