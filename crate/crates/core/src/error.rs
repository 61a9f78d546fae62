use thiserror::Error;

#[derive(Debug, Error)]
pub enum PackError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid decision record: {0}")]
    InvalidRecord(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unsupported schema version {found:?} (expected major {expected})")]
    UnsupportedVersion { found: String, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = PackError> = std::result::Result<T, E>;
