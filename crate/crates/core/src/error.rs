use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("matrix shape {rows}x{cols} does not match {expected}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: String,
    },

    #[error("homomorphism not well defined: {0}")]
    NotWellDefined(String),

    #[error("sequence maps do not compose at position {position}: {detail}")]
    DimensionMismatch { position: usize, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{q} does not divide {q_prime}")]
    Divisibility { q: String, q_prime: String },

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("catalog entry {entry:?}: {reason}")]
    Catalog { entry: String, reason: String },

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("colimit did not stabilize: {0}")]
    NoStabilization(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("malformed transformation sample: {0}")]
    Sample(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
