use thiserror::Error;

/// Errors raised by the arithmetic and counting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("component out of range: {0}")]
    Range(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("{0} is not odd")]
    NotOdd(String),
    #[error("{0} is not a Gaussian prime")]
    NotPrime(String),
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("{0} is not an odd squarefree positive integer")]
    NotOddSquarefree(u64),
    #[error("{0} is out of the supported range")]
    OutOfRange(u64),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("cannot parse Gaussian integer from {0:?}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
