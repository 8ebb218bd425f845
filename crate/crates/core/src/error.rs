use thiserror::Error;

/// Errors raised across the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("rational dependence witness: {0}")]
    RationalDependence(String),

    #[error("irregular point: label {label:?} lands on the window boundary (coordinate {coordinate})")]
    Irregular { label: Vec<i64>, coordinate: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("tolerance conflict: {0}")]
    Tolerance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RationalDependence(_) | Error::Irregular { .. } => 2,
            Error::Unsupported(_) => 3,
            Error::Degenerate(_) => 4,
            Error::Tolerance(_) => 5,
            Error::Input(_) | Error::Parse(_) | Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
