use thiserror::Error;

/// Errors raised by the operator, closure and dynamics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("{n_qubits} qubits exceeds the dense-matrix limit of {max}")]
    TooLarge { n_qubits: usize, max: usize },

    #[error("qubit index {qubit} out of range for {n_qubits} qubits (indices are 1-based)")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("projections overlap on qubit {0}")]
    OverlappingProjections(usize),

    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
