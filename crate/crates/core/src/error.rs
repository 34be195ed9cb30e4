use alloc::string::String;
use alloc::vec::Vec;

/// Every failure the core library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("precision mismatch: {left} bits vs {right} bits")]
    PrecisionMismatch { left: u32, right: u32 },
    #[error("invalid precision: {bits} bits (minimum 64)")]
    InvalidPrecision { bits: u32 },
    #[error("q base must satisfy 0 < |q| < 1")]
    InvalidQBase,
    #[error("division by zero")]
    DivisionByZero,
    #[error("vanishing factor in a shifted factorial at offset {offset}")]
    DivisionByZeroPole { offset: i64 },
    #[error("factor within {distance:e} of a pole (clearance {clearance:e})")]
    NearPole { distance: f64, clearance: f64 },
    #[error("log-gamma pole at a non-positive integer")]
    PoleAtNonPositiveInteger,
    #[error("cannot parse decimal number {0:?}")]
    Parse(String),
    #[error("Vandermonde nodes are not pairwise distinct")]
    DegenerateNodes,
    #[error("series diverges: shell maxima grow up to shell {shell}")]
    Diverged { shell: u32 },
    #[error("term budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("pole in summand at index {index:?}")]
    PoleInTerm { index: Vec<i64> },
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("missing parameter {0:?}")]
    MissingParameter(String),
    #[error("parameter {name:?} has length {found}, expected {expected}")]
    SchemaMismatch { name: String, expected: usize, found: usize },
    #[error("constraint violated: {constraint} (measured {measured:e})")]
    ConstraintViolated { constraint: String, measured: f64 },
    #[error("sampler exhausted {attempts} attempts for {id}")]
    ExhaustedAttempts { id: String, attempts: u32 },
    #[error("no documented degenerations for {0}")]
    NoDegenerations(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = core::result::Result<T, Error>;
