use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid occupation: {0}")]
    InvalidOccupation(String),
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),
    #[error("mode index {index} out of range for {modes} modes")]
    OutOfRange { index: usize, modes: usize },
    #[error("modes must be distinct: {0:?}")]
    DuplicateModes(Vec<usize>),
    #[error("not a qubit state on the given pairing")]
    NotAQubitState,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("unknown scheme id: {0}")]
    UnknownScheme(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
