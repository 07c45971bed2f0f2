use crate::picard::MAX_RANK;

/// Errors raised by lattice, enumeration and algebra routines.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("blowup count {0} out of range (0..={MAX_RANK})")]
    RankOutOfRange(usize),
    #[error("operation requires n in {lo}..={hi}, got n = {n}")]
    Unsupported { n: usize, lo: usize, hi: usize },
    #[error("lattice rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid class {class}: {reason}")]
    InvalidClass { class: String, reason: String },
    #[error("search truncated after {budget} steps ({what})")]
    Truncated { what: String, budget: usize },
    #[error("enumeration unbounded: {0}")]
    Unbounded(String),
    #[error("operands belong to different algebras or modules")]
    Mismatch,
    #[error("parse error in {field}: {reason}")]
    Parse { field: String, reason: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
