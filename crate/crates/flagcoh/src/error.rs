//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidCartanType(String),

    #[error("node {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },

    #[error("group enumeration exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("matrix does not permute the roots of this system")]
    NotAWeylElement,

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("input polynomial is not homogeneous of the stated degree")]
    InhomogeneousInput,

    #[error("relation is not divisible as required")]
    NotDivisible,

    #[error("partition [{a},{b}] does not fit the 2x{width} box")]
    PartitionOutOfBox { a: u32, b: u32, width: u32 },

    #[error("class is not proportional to the alternating Schubert sum under either sign")]
    ProportionalityFailure,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
