use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (deviation {0:.3e})")]
    InvalidTrace(f64),

    #[error("negative eigenvalue {0:.3e} beyond tolerance")]
    NegativeEigenvalue(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("vectors are not orthonormal (max Gram deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("dimension {0} is not prime")]
    NotPrime(usize),

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { dim: usize, rank: usize },

    #[error("parameter `{name}` = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("ensemble is not informationally complete ({rank} of {needed} directions)")]
    NotInformationallyComplete { rank: usize, needed: usize },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("no detection at any noise level: correlation vanishes on the pure state")]
    NoDetection,
}

pub type Result<T> = std::result::Result<T, Error>;
