use thiserror::Error;

use crate::leakage::LeoRejection;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Pauli string has {found} factors but the register has {expected} qubits")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid qubit pair ({i}, {j}) for a {n}-qubit register")]
    InvalidPair { n: usize, i: usize, j: usize },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("LEO rejected: {0}")]
    Leo(#[from] LeoRejection),

    #[error("{name} does not act as a Pauli on the logical factor (residual {residual:.3e})")]
    NonPauliCodeBlock { name: String, residual: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("unknown basis element {0:?}")]
    UnknownElement(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
