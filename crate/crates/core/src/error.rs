use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands live on different Hilbert spaces.
    #[error("space mismatch: expected `{expected}`, found `{found}`")]
    SpaceMismatch { expected: String, found: String },

    /// A precondition of the called operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested joint dimension exceeds the configured cap.
    #[error("joint dimension {requested} exceeds cap {cap}")]
    Resource { requested: usize, cap: usize },

    /// A numerical routine produced an inconsistent result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The event probability is below the conditioning floor, so no
    /// conditional statistics exist.
    #[error("event never happens: p(event) = {p_event:e} is below the floor {floor:e}")]
    EventNeverHappens { p_event: f64, floor: f64 },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
