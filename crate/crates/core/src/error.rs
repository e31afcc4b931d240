use thiserror::Error;

/// Errors raised by the exact polyhedral routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subdeterminant enumeration needs {needed} submatrices, cap is {cap}")]
    EnumerationTooLarge { needed: u128, cap: u128 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("row index {index} out of range for {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
