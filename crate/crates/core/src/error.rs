//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },

    #[error("negative exponent at byte {position}")]
    NegativeExponent { position: usize },

    #[error("dimension mismatch: polynomial has {expected} variables, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("level exponent m must be >= {min}, got {got}")]
    LevelTooSmall { min: u32, got: u32 },

    #[error("constant polynomial rejected: {0}")]
    ConstantPolynomial(String),

    #[error("enumeration budget exceeded: {required} points required, {allowed} allowed")]
    BudgetExceeded { required: String, allowed: String },

    #[error("arithmetic range exceeded: {0}")]
    RangeExceeded(String),

    #[error("power-sum exponent {d} does not divide p - 1 = {pm1}")]
    OrderDoesNotDivide { d: u64, pm1: u64 },

    #[error("resolution data invalid: {0}")]
    ResolutionData(String),

    #[error("missing character data for order {order} (index {index})")]
    MissingCharacterData { order: u64, index: u64 },

    #[error("data file not flagged good_reduction_regime; Prop-2.3 reconstruction refused")]
    NotGoodReduction,

    #[error("no resolution component passes the fiber filter")]
    EmptyFiberFilter,

    #[error("need at least {min} {what}, got {got}")]
    Underdetermined { what: String, min: usize, got: usize },

    #[error("critical values {a} and {b} are congruent mod {p}; partition ill-defined")]
    CongruentCriticalValues { a: String, b: String, p: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("histogram file malformed: {0}")]
    HistogramFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
