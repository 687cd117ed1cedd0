use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials or ideals belong to different rings")]
    RingMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("degenerate camera: rank {rank} < {expected}")]
    DegenerateCamera { rank: usize, expected: usize },
    #[error("invalid camera shape: {0}")]
    InvalidCamera(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("locus not of expected dimension semantics (expected dimension {0} < 0)")]
    NegativeExpectedDimension(i64),
    #[error("empty locus")]
    EmptyLocus,
    #[error("ideal is not zero-dimensional after slicing")]
    NotZeroDimensional,
    #[error("point is not on the locus")]
    NotOnLocus,
    #[error("point is not in the requested center")]
    NotInCenter,
    #[error("base point is a vertex of the quadric")]
    QuadricVertex,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("Groebner computation exceeded its budget ({0})")]
    BudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
