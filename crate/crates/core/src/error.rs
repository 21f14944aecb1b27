use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A sequence or weight that must be positive evaluated to a
    /// non-positive value at the given index.
    #[error("term at index {index} is not positive")]
    NonPositiveTerm { index: usize },

    /// A precondition on arguments was violated.
    #[error("{0}")]
    Domain(String),

    /// Automatic inverse-transform mode needs the target weights to approach
    /// a limit and none could be detected.
    #[error("weight limit unavailable: {0}")]
    LimitUnavailable(String),

    /// Extrapolation stopped above the residual target.
    #[error("extrapolation did not converge: best estimate {best}, residual {residual:e}")]
    NonConverged { best: f64, residual: f64 },

    /// A bounded search ran out of its configured budget.
    #[error("search budget exhausted: {0}")]
    Resource(String),

    /// A measure cannot produce a weight sequence (all mass at the origin).
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    /// A completion construction produced impossible moment data.
    #[error("invalid completion: {0}")]
    InvalidCompletion(String),

    /// Two routes that must agree by an identity disagreed; this indicates
    /// an arithmetic bug, not bad input.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
