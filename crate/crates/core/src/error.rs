use thiserror::Error;

/// Errors reported by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("modulus {0} is reducible or has the wrong degree")]
    ReducibleModulus(String),
    #[error("field of order {0} exceeds the supported element width")]
    UnsupportedSize(String),
    #[error("rank {r} out of range 0..={max}")]
    BadRank { r: usize, max: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{what}: {count} objects exceed the enumeration cap {cap}")]
    TooLarge {
        what: String,
        count: String,
        cap: u64,
    },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("subspace is not an element of the lattice")]
    NotAnElement,
    #[error("elements are not comparable")]
    NotComparable,
    #[error("element is not modular")]
    NotModular,
    #[error("unsupported q = {0}")]
    UnsupportedQ(u64),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("duplicate sample at q = {0}")]
    DuplicateQ(u64),
    #[error("sample at q = {0} is not divisible by the interpolation denominator")]
    NonIntegralZPoint(u64),
    #[error("j = {j} out of range 1..={k}")]
    JOutOfRange { j: usize, k: usize },
    #[error("code and lattice live in different ambient spaces")]
    AmbientMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
