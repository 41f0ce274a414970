use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system {family}{rank}: {reason}")]
    InvalidType {
        family: char,
        rank: usize,
        reason: String,
    },

    #[error("root system failed validation: {0}")]
    Invalid(String),

    #[error("vector is not a root: {0}")]
    NotARoot(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("group too large: order exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("point lies outside the closed chamber: {0}")]
    OutsideChamber(String),

    #[error("H0 is not regular: {0}")]
    NotRegular(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("probe failed: {0}")]
    Probe(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
