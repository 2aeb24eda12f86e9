//! Crate-wide error type.

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical parameter is outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An inconsistent or impossible configuration was requested.
    #[error("configuration error: {0}")]
    Config(String),

    /// A scenario file violated the schema; the message names the key path.
    #[error("scenario error: {0}")]
    Schema(String),

    /// Two inputs that must share a grid / component / convention do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// The FDTD field state diverged (non-finite or runaway growth).
    #[error("divergence fault at step {step}: {detail}")]
    Divergence { step: usize, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv format error: {0}")]
    CsvFormat(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
