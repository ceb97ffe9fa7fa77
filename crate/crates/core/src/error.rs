use alloc::string::String;

/// Errors raised by the algebra kernel and the criteria built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("division by a non-unit constant")]
    NonUnitDivision,
    #[error("coefficient domains or variable counts do not match")]
    DomainMismatch,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("Groebner basis computation exceeded the budget of {0} reduction steps")]
    BudgetExceeded(u64),
    #[error("operation requires positive characteristic")]
    WrongCharacteristic,
    #[error("operation requires a regular (polynomial) ambient ring")]
    NonRegularAmbient,
    #[error("relations are not defined over the base: {0}")]
    NotOverBase(String),
    #[error("element is a unit at the distinguished point")]
    Unit,
    #[error("input is not homogeneous for any positive grading")]
    NonGraded,
    #[error("prime {0} is excluded by the arithmetic model")]
    ExcludedPrime(u64),
    #[error("model degenerates modulo {0}: {1}")]
    Degenerate(u64, String),
    #[error("no Frobenius power q = p^e with (q-1)*Delta integral: {0}")]
    NoValidFrobeniusPower(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
