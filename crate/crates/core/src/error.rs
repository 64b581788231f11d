use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame must contain at least one world")]
    EmptyFrame,
    #[error("frame has {size} worlds, the limit is {max}")]
    FrameTooLarge { size: usize, max: usize },
    #[error("duplicate world label {0:?}")]
    DuplicateLabel(String),
    #[error("world labels must be non-empty")]
    EmptyLabel,
    #[error("unknown world label {0:?}")]
    UnknownLabel(String),
    #[error("world index {index} out of range for a frame of {size} worlds")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live on different frames")]
    FrameMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("mass {mass} is negative or not finite")]
    InvalidMass { mass: f64 },
    #[error("masses sum to {sum}, expected 1 within {tolerance:e}")]
    MassSum { sum: f64, tolerance: f64 },
    #[error("expected a dense vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("belief vector is not a belief function: recovered mass {mass} at subset #{index}")]
    InvalidBelief { index: usize, mass: f64 },
    #[error("commonality vector is not valid: {0}")]
    InvalidCommonality(String),
    #[error("total contradiction: m(∅) = 1, the operation is undefined")]
    TotalContradiction,
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitRange { name: &'static str, value: f64 },
    #[error("evidence id {0:?} already present in the corpus")]
    DuplicateEvidence(String),
    #[error("no evidence with id {0:?} in the corpus")]
    UnknownEvidence(String),
}
