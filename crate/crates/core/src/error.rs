use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Sector or ladder too large for the configured state cap.
    #[error("basis dimension {dim} exceeds the configured capacity of {cap} states")]
    Capacity { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operator was requested over a basis built for a different system.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("initial configuration {0} is not contained in the basis")]
    MissingState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("eigensolver failed to converge")]
    NoConvergence,

    /// No dynamics: the Rabi frequency vanishes.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("non-positive value {value} cannot enter a logarithmic fit")]
    NonPositive { value: f64 },
}
