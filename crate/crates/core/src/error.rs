use thiserror::Error;

/// Errors raised by the height and counting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not prime")]
    NotPrime(u128),

    /// The evaluation point coincides with a stacky root; such points are
    /// classes in `B(mu_m)` and need `type1_height`.
    #[error("point lies on stacky root {root}; use type1_height for type-1 points")]
    StackyPoint { root: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("need at least {need} usable samples to fit, have {have}")]
    InsufficientSamples { need: usize, have: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
