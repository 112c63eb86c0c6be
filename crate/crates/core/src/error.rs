use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {elem} does not belong to the carrier of monoid {monoid}")]
    ForeignElement { monoid: String, elem: String },

    #[error("relations are annotated by different monoids ({left} vs {right})")]
    MonoidMismatch { left: String, right: String },

    #[error("attribute error: {0}")]
    Attribute(String),

    #[error("monoid {monoid} does not support {capability}{}", detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default())]
    Unsupported {
        monoid: String,
        capability: &'static str,
        detail: Option<String>,
    },

    #[error("search budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("schema is cyclic; irreducible residual: {residual}")]
    Cyclic { residual: String },

    #[error("ordering invalid at position {index}: {message}")]
    Ordering { index: usize, message: String },

    #[error("invalid monoid table: {0}")]
    InvalidTable(String),

    #[error("{family} parse error: {message} (token {token:?})")]
    ParseElem {
        family: String,
        token: String,
        message: String,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("statement {index}: {message}")]
    Statement { index: usize, message: String },

    #[error("internal contract violation: {0}")]
    Contract(String),

    #[error("fold step {step}: {message}")]
    FoldStep { step: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
