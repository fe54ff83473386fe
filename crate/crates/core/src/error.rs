use thiserror::Error;

use crate::tnorm::TNormKind;

/// Errors raised by the library. Row and column positions in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} is outside [0, 1]")]
    OutOfUnitInterval { value: f64 },

    #[error("entry A[{row}][{col}] = {value} is outside [0, 1]")]
    MatrixEntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("entry b[{row}] = {value} is outside [0, 1]")]
    RhsEntryOutOfRange { row: usize, value: f64 },

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index {index} is out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown t-norm `{0}`")]
    UnknownTNorm(String),

    #[error("operation requires the {expected} t-norm, system uses {found}")]
    UnsupportedTNorm { expected: TNormKind, found: TNormKind },

    #[error("no equation is solvable on its own, so no consistent subsystem exists")]
    NoSolvableEquation,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("system has {n} equations, exhaustive enumeration is capped at {cap}")]
    TooLargeForExhaustive { n: usize, cap: usize },

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid grid step {0}: must lie in (0, 0.5] and divide 1")]
    InvalidGrid(f64),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
