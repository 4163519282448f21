use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("invalid code construction: {0}")]
    Construction(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("decoding failure: {0}")]
    DecodingFailure(String),
    #[error("requested radius {tau} exceeds the list-decoding limit {limit}")]
    RadiusTooLarge { tau: usize, limit: usize },
    #[error("radius domain error: 4t+2 = {} exceeds n = {n}", 4 * .t + 2)]
    Domain { n: u64, t: u64 },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("random draw exhausted after {0} rejections")]
    Exhausted(usize),
    #[error("countermeasure violated: {0}")]
    Countermeasure(String),
    #[error("payload of {len} bits exceeds capacity {capacity}")]
    PayloadTooLong { len: usize, capacity: usize },
    #[error("short blocks carry exactly {expected} payload bits, got {len}")]
    PayloadLength { len: usize, expected: usize },
    #[error("no candidate passed the tag check")]
    NoCandidate,
    #[error("{0} candidates passed the tag check")]
    Ambiguous(usize),
    #[error("format error: {0}")]
    Format(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
