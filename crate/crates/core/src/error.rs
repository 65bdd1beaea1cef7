use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// print a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(String),
    #[error("polynomial is not doubly monic: constant term is {found}, expected {expected}")]
    NotDoublyMonic { found: String, expected: i32 },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("degree {degree} is out of the supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    #[error("exterior index k = {k} is out of range 1..={max}")]
    IndexOutOfRange { k: usize, max: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("extension degree {given} is too small, at least {required} is needed")]
    FieldTooSmall { given: usize, required: usize },
    #[error("modulus of degree {0} is not irreducible")]
    ReducibleModulus(usize),
    #[error("undecided: could not factor {0} within the trial-division bound")]
    Undecided(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial is not separable: gcd(f, f') = {0}")]
    Inseparable(String),
    #[error("parameter assignment mismatch: {0}")]
    Parameters(String),
    #[error("search volume {volume} exceeds the budget {budget}")]
    BudgetExceeded { volume: String, budget: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
