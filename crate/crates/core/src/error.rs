use std::path::PathBuf;

use thiserror::Error;

/// Errors from reading pattern and permutation literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing ':' in pattern literal `{0}`")]
    MissingColon(String),
    #[error("malformed digits in `{0}`")]
    MalformedDigits(String),
    #[error("repeated value in `{0}`")]
    RepeatedValue(String),
    #[error("`{0}` is not a permutation of 1..k")]
    NotPermutation(String),
    #[error("box token `{0}` must have exactly two digits")]
    TokenLength(String),
    #[error("box token `{token}` lies outside [0,{k}]x[0,{k}]")]
    BoxOutOfRange { token: String, k: usize },
    #[error("pattern length {0} too long for the literal format (max 9)")]
    TooLong(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("depth {requested} exceeds the configured maximum {max}")]
    ResourceGuard { requested: usize, max: usize },
    #[error("operation needs a non-empty permutation")]
    EmptyPermutation,
    #[error("cache I/O on {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad cache line in {path}: {message}")]
    CacheFormat { path: PathBuf, message: String },
    #[error("seed data: {0}")]
    Seed(String),
    #[error("no formula registered for class {class_id} (status {status})")]
    NoFormula { class_id: u32, status: String },
    #[error("no generating function registered for {0}")]
    NoGf(String),
    #[error("series: {0}")]
    Series(String),
    #[error("unknown bijection `{0}`")]
    UnknownBijection(String),
}
