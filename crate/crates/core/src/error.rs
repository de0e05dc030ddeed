use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("size mismatch: left operand has n = {left}, right operand has n = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("bad index set: {0}")]
    BadIndexSet(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("degree bound {bound} exceeded while solving for b({index})")]
    DegreeBoundExceeded { bound: usize, index: String },

    #[error("bad region: {0}")]
    BadRegion(String),

    #[error("not a ladder: {0}")]
    NotALadder(String),

    #[error("bad generator index {index}: must lie in 1..={max}")]
    BadGeneratorIndex { index: usize, max: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("q-exponent overflow")]
    ExponentOverflow,

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
