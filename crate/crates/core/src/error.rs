use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive rational, got {0}")]
    NonPositive(String),

    #[error("invalid rational literal {literal:?}: {reason}")]
    RationalParse { literal: String, reason: String },

    #[error("balanced ternary digit {digit} at index {index} is outside {{-1, 0, 1}}")]
    InvalidDigit { index: usize, digit: i64 },

    #[error("invalid balanced ternary numeral {0:?}")]
    NumeralParse(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {0} appears more than once")]
    DuplicatePrime(u64),

    #[error("parse error at position {position}: {message}")]
    DivisorParse { position: usize, message: String },

    #[error("principal divisor of zero is undefined")]
    ZeroPrincipal,

    #[error("H^0 set has {count} elements, refusing to enumerate more than {limit}")]
    EnumerationTooLarge { count: String, limit: u64 },

    #[error("generating set has {size} elements, exhaustive check supports at most {limit}")]
    TooManyGenerators { size: usize, limit: usize },

    #[error("range [-{n}, {n}] is too large for exhaustive coverage (limit {limit})")]
    RangeTooLarge { n: u64, limit: u64 },

    #[error("invalid generator {value}: {reason}")]
    InvalidGenerator { value: String, reason: String },

    #[error("no generating set of cardinality <= {0} exists")]
    NotFound(usize),

    #[error("invalid tolerance module: {0}")]
    InvalidModule(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("{what} = {value} exceeds the supported bound {limit}")]
    GuardExceeded { what: &'static str, value: u64, limit: u64 },
}
