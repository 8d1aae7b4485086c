use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("words over different alphabets ({left} vs {right} symbols)")]
    MixedAlphabets { left: u32, right: u32 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("symbol {symbol} is outside an alphabet of size {size}")]
    InvalidSymbol { symbol: u32, size: u32 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("search horizon exhausted: {0}")]
    Horizon(String),

    #[error("value not representable: {0}")]
    NotRepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::Budget {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }

    /// Machine-readable reason tag written into run records.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::MixedAlphabets { .. } => "mixed_alphabets",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidSymbol { .. } => "invalid_symbol",
            Error::OutOfRange(_) => "out_of_range",
            Error::Precondition(_) => "precondition",
            Error::Budget { .. } => "budget_exceeded",
            Error::Horizon(_) => "horizon_exhausted",
            Error::NotRepresentable(_) => "not_representable",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
