use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("picture of {pixels} pixels exceeds the cap of {cap}")]
    Dimensions { pixels: usize, cap: usize },
    #[error("expected {expected} pixel tokens, found {actual}")]
    TokenCount { expected: usize, actual: usize },
    #[error("bad pixel token {0:?}")]
    Token(String),
    #[error("bad bitmask {0:?}")]
    Bitmask(String),
    #[error("unsupported report schema {0}")]
    Schema(u32),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error(transparent)]
    Core(#[from] tanglescope::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_error(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}
