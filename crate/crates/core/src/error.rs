use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("syntax error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("division by the zero polynomial at position {position}")]
    DivisionByZero { position: usize },

    #[error("map has degree {degree} after cancellation; dynamics needs a nonconstant map")]
    DegenerateMap { degree: usize },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("Hensel condition violated: {0}")]
    Hensel(String),

    #[error("insufficient p-adic precision: {0}")]
    Precision(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no certificate found: {0}")]
    Indeterminate(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegreeCap { .. } | Error::Precision(_) | Error::Degenerate(_)
            | Error::Indeterminate(_)
            | Error::Io(_) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
