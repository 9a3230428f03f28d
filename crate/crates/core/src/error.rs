use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a local ring")]
    NonLocalRing(String),

    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),

    #[error("closed form precondition violated: {0}")]
    Precondition(String),

    #[error("no closed form applies to {0}")]
    OffFamily(String),

    #[error("circulant offset {offset} is outside 1..={max}")]
    InvalidOffset { offset: usize, max: usize },

    #[error("graph on {order} vertices exceeds the vertex ceiling {ceiling}")]
    CeilingExceeded { order: usize, ceiling: usize },

    #[error("sweep selected no cases")]
    EmptySweep,

    #[error("cannot parse radical expression {input:?}: {reason}")]
    RadicalParse { input: String, reason: String },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
