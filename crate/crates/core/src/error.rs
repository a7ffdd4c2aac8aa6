use thiserror::Error;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("divisor sum of 0 is undefined")]
    ZeroDivisorSum,

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("polynomial is not of the form u*(polynomial in v): {0}")]
    NotUForm(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("symbol family mismatch: {0}")]
    SymbolFamily(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("zero scan failed: {0}")]
    ScanFailure(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDivisorSum => "zero_divisor_sum",
            Error::InvalidIndex(_) => "invalid_index",
            Error::NotUForm(_) => "not_u_form",
            Error::OutOfRange(_) => "out_of_range",
            Error::Parse { .. } => "parse",
            Error::SymbolFamily(_) => "symbol_family",
            Error::InsufficientPrecision(_) => "insufficient_precision",
            Error::BracketFailure(_) => "bracket_failure",
            Error::ScanFailure(_) => "scan_failure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
