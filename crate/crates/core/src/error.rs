use thiserror::Error;

use crate::params::Variant;

/// A violated parameter constraint. The message always names the constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{name} must be at least {min}, got {value}")]
    TooSmall {
        name: &'static str,
        min: u64,
        value: u64,
    },
    #[error("constraint `{constraint}` violated: {detail}")]
    Constraint {
        constraint: &'static str,
        detail: String,
    },
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} must be prime for sampling and enumeration")]
    NotPrime(u64),
    #[error("q = {0} exceeds the supported bound 2^31")]
    QTooLarge(u64),
    #[error(
        "no closed form for {variant} with n = {n}: only the monodimensional case n = 1 is \
         known (the multidimensional generalization is an open problem)"
    )]
    Multidimensional { variant: Variant, n: u32 },
    #[error("formula undefined at these parameters: {0}")]
    Undefined(String),
}

impl ParamError {
    pub(crate) fn constraint(constraint: &'static str, detail: impl Into<String>) -> Self {
        ParamError::Constraint {
            constraint,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("{what} refused: size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: String,
    },
    #[error("division by zero in F_{q}")]
    DivisionByZero { q: u64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
