use thiserror::Error;

use crate::monomial::Monomial;
use crate::series::Precision;

/// Errors raised by the algebraic and rewriting layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent overflow while multiplying monomials")]
    ExponentOverflow,

    #[error("leading term is zero or not determined at the current precision")]
    ZeroOrUnknownLeading,

    #[error("monomial {monomial} is not reducible by rule {rule}")]
    NotReducible { monomial: Monomial, rule: usize },

    #[error("rule index {index} out of range (rule set has {len} rules)")]
    RuleIndexOutOfRange { index: usize, len: usize },

    #[error("target precision {target} is unattainable; inputs cap it at {attainable}")]
    PrecisionUnattainable { target: u64, attainable: Precision },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("reduction step limit of {0} exceeded")]
    StepLimitExceeded(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
