use thiserror::Error;

/// Errors produced by the selection library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set needs at least 2 elements, got {0}")]
    GroundSetTooSmall(usize),

    #[error("subset of size {size} is outside the objective domain (need 1 <= |T| <= {max})")]
    OutsideDomain { size: usize, max: usize },

    #[error("element index {index} out of range for ground set of size {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("linkage is undefined for element {element}, which is already in the set")]
    ElementInSet { element: usize },

    #[error("subset universe {subset} does not match ground set size {ground}")]
    UniverseMismatch { subset: usize, ground: usize },

    #[error("weight matrix must be square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("invalid weight W[{row}][{col}] = {value}: {reason}")]
    InvalidWeight {
        row: usize,
        col: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("linkage value for element {element} is not finite ({value})")]
    NonFiniteLinkage { element: usize, value: f64 },

    #[error("set function evaluation failed: {0}")]
    SetFunction(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("need at least 3 samples, got {0}")]
    TooFewSamples(usize),

    #[error("non-finite value in column '{column}' at row {row}")]
    NonFiniteData { column: String, row: usize },

    #[error("distance matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("non-finite distance at ({row}, {col})")]
    NonFiniteDistance { row: usize, col: usize },

    #[error("exhaustive search over {size} elements exceeds the cap of {cap}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("series starting at element {start} failed: {source}")]
    TaskFailed {
        start: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
