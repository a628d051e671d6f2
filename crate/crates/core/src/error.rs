use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("elements belong to different rings")]
    MismatchedParents,

    #[error("ring of order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },

    #[error("modulus is not monic: {0}")]
    NonMonic(String),

    #[error("invalid ring construction: {0}")]
    InvalidRing(String),

    #[error("{value} is not a prime")]
    NotPrime { value: u64 },

    #[error("coefficient {coefficient} is not divisible by {divisor}")]
    NonDivisible { coefficient: String, divisor: String },

    #[error("no assignment for variable {0}")]
    MissingVariable(String),

    #[error("variable {0} is not allowed here")]
    ForeignVariable(String),

    #[error("negative exponent {0}")]
    NegativeExponent(i64),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("Frobenius needs truncation length at least 2")]
    FrobeniusUnavailable,

    #[error("base ring has characteristic {characteristic}, not {p}")]
    NotCharacteristic { p: u64, characteristic: u64 },

    #[error("unsupported parameters p={p}, n={n}")]
    Unsupported { p: u64, n: usize },

    #[error("table verification failed: {0}")]
    Verification(String),

    #[error("corrupt table file: {0}")]
    Corrupt(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
