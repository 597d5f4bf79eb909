use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree {0} is odd; invariant basis elements have even degree")]
    OddDegree(u32),

    #[error("partition part {part} exceeds ambient dimension {n}")]
    PartExceedsDimension { part: u32, n: usize },

    #[error("sigma index {r} out of range 1..={n}")]
    SigmaIndex { r: usize, n: usize },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: need {needed} bytes, budget is {budget} bytes")]
    ResourceLimit { needed: u64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
