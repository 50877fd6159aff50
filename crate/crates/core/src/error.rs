use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("no word reaches min_count {min_count}")]
    EmptyVocabulary { min_count: usize },

    #[error("slice {slice}: no {missing} words found")]
    EmptyRoleSet { slice: String, missing: &'static str },

    #[error("corpus slice has no in-vocabulary tokens")]
    CorpusEmpty,

    #[error("vocabulary does not match corpus: {0}")]
    VocabMismatch(String),

    #[error("co-occurrence table is empty")]
    EmptyCooccurrence,

    #[error("malformed embedding header: {0:?}")]
    MalformedHeader(String),

    #[error("line {line}: expected {expected} values, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row} is a zero vector")]
    ZeroVector { row: usize },

    #[error("invalid cluster count k={k} for {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("every cluster has zero diameter")]
    DegenerateDiameter,

    #[error("clusterings cover different word sets")]
    WordSetMismatch,

    #[error("cannot average an empty series")]
    EmptySeries,

    #[error("slice {slice} not found at {path}")]
    MissingSlice { slice: String, path: PathBuf },

    #[error("expected exactly {expected} model(s), got {found}")]
    ModelCountError { expected: String, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    /// An I/O failure tagged with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::ModelCountError { .. } | Error::InvalidK { .. } => 2,
            Error::NonFinite(_) => 4,
            _ => 3,
        }
    }
}
