use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("insufficient precision: need reliable order {needed}, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("no unit solution for the requested right factor")]
    NoUnitSolution,
    #[error("element is not a generator")]
    NotAGenerator,
    #[error("not geometric: {0}")]
    NotGeometric(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("beta vanishes, no sub-theme parameter to classify")]
    BetaVanishes,
    #[error("module is not monogenic: {0}")]
    NotMonogenic(String),
    #[error("power series in a does not converge within the order budget")]
    NonConvergent,
    #[error("invariant mismatch: {0}")]
    InvariantMismatch(String),
}

impl Error {
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
