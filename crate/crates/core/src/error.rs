use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("points must have at least one dimension")]
    ZeroDimension,

    #[error("coordinate {0} is not finite")]
    NonFinite(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("rectangle is empty")]
    EmptyRect,

    #[error("duplicate point id {0}")]
    DuplicateId(u64),

    #[error("invalid query: {0}")]
    InvalidSpec(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("could not sample {wanted} query points after {attempts} anchors")]
    QuerySampling { wanted: usize, attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
