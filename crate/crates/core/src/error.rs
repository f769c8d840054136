use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("action index {index} out of range for {len} actions")]
    ActionIndex { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed rational {0:?}")]
    ParseRational(String),

    /// An internal consistency check failed. This always signals a bug or a
    /// theorem-level contradiction, never bad input.
    #[error("invariant `{invariant}` violated: {detail}")]
    Internal {
        invariant: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn internal(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Internal {
            invariant,
            detail: detail.into(),
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal { .. })
    }
}
