use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero modulus")]
    ZeroModulus,

    #[error("degree must be >= 1")]
    ConstantPolynomial,

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("degenerate layout: no valid middle position (p = {mexp}, w = {word_bits})")]
    DegenerateLayout { mexp: u32, word_bits: u32 },

    #[error("invalid recursion parameters: {0}")]
    InvalidParams(String),

    #[error("float mode requires 32-bit words")]
    FloatNeedsWord32,

    #[error("exceeds parallelism bound N-M = {bound} (requested {lanes} lanes)")]
    ParallelismBound { lanes: usize, bound: usize },

    #[error("invalid lane configuration: {0}")]
    LaneConfig(String),

    #[error("brute force limited to p <= 21 (got p = {0})")]
    BruteForceTooLarge(u32),

    #[error("k(v) exceeds theoretical bound at v = {v}: k = {k}, floor(p/v) = {bound}")]
    KvExceedsBound { v: usize, k: usize, bound: usize },

    #[error("generator is not maximal-period: {0}")]
    NotMaximal(String),

    #[error("search exhausted after {0} candidates")]
    SearchExhausted(u64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
