use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variant mismatch: expected {expected}, found {found}")]
    VariantMismatch { expected: String, found: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid bijection: {0}")]
    InvalidBijection(String),

    #[error("invalid payoff function: {0}")]
    InvalidFunction(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid order weights: {0}")]
    InvalidOrderWeights(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid rational literal `{0}`")]
    Parse(String),
}

impl Error {
    pub(crate) fn mismatch(expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::VariantMismatch {
            expected: expected.into(),
            found: found.into(),
        }
    }
}
