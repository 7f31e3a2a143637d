use thiserror::Error;

/// Failure classes of the engine.
///
/// `Window` is recoverable: the caller can rebuild with a larger cutoff.
/// `Internal` means a construction that must succeed by theory did not,
/// and is never caused by bad input alone.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("vector does not lie in the ambient subspace")]
    Membership,
    #[error("degree window exhausted: {0}")]
    Window(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
