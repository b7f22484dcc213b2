use thiserror::Error;

/// Errors raised by law construction, bound evaluation and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    /// A moment budget or summand law violates its feasibility constraint.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("operation requires a lattice law (binomial or Poisson), got {0}")]
    UnsupportedFamily(&'static str),

    #[error("unsupported order alpha = {alpha} for {family}")]
    UnsupportedOrder { alpha: u32, family: &'static str },

    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// The threshold is not strictly between the support infimum and the mean.
    #[error("x = {x} is outside the interior regime ({lower}, {upper})")]
    Regime { x: f64, lower: f64, upper: f64 },

    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

impl BoundError {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            BoundError::NumericFailure(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, BoundError>;
