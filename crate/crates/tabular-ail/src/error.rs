use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Array shapes or dimensions disagree with the declared sizes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A probability vector failed validation.
    #[error("invalid distribution ({what}): sums to {sum}")]
    InvalidDistribution { what: String, sum: f64 },

    /// A scalar or table entry is outside its allowed range.
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// A configuration is inconsistent or unusable.
    #[error("configuration error: {0}")]
    Config(String),

    /// Text input (CSV, config) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config file error: {0}")]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
