use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse permutation {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("not a permutation: {0}")]
    NotBijective(String),

    #[error("pattern {0} contains 132")]
    Contains132(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("operation needs a nonempty tree")]
    EmptyTree,

    #[error("Laurent polynomial has a term d^{0}; expected only negative exponents")]
    NonNegativeExponent(i32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported pattern {0} for this functional")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
