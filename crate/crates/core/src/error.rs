use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group element {0} out of range for a group of order {1}")]
    ElementOutOfRange(usize, usize),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid algebra {algebra}: {message}")]
    InvalidAlgebra { algebra: String, message: String },

    #[error("element of algebra {found} used where algebra {expected} was expected")]
    OwnerMismatch { expected: String, found: String },

    #[error("{0}")]
    Degree(String),

    #[error("class is not an honest bundle: {0}")]
    NotHonest(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
