use thiserror::Error;

/// Errors raised by the group, graph, walk and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("element {bits:#b} does not fit in dimension {n}")]
    ElementOutOfRange { bits: u64, n: u32 },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),

    #[error("vertex count {size} exceeds the dense oracle cap {cap}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("symmetric eigensolver did not converge")]
    EigenNoConvergence,

    #[error("graph is not reducible to a Z2^m circulant")]
    NotCirculant,

    #[error("invalid initial state: {0}")]
    InvalidState(String),

    #[error("time stamps differ: {0} vs {1}")]
    TimeMismatch(f64, f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
