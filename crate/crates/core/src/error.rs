use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad argument: {0}")]
    BadArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("state {index} has no pure-vector representation")]
    NotPure { index: usize },

    #[error("table shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid probability table: {0}")]
    InvalidTable(String),

    #[error("witness value {value} exceeds the maximum {max} attainable in any dimension")]
    OutOfRange { value: f64, max: f64 },

    #[error("decoding does not cover measurement {measurement}, symbol {symbol}")]
    IncompleteDecoding { measurement: usize, symbol: usize },

    #[error("enumeration too large: canonical encodings of N={n} into d={d} symbols exceed the limit of {limit}")]
    TooLarge { n: usize, d: usize, limit: u64 },

    #[error("effects do not form a POVM (deviation from identity {deviation:e})")]
    NotAPovm { deviation: f64 },

    #[error("see-saw half-step decreased the objective from {before} to {after}")]
    NonMonotonic { before: f64, after: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
