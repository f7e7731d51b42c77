use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, LabError>;

/// Errors surfaced by the laboratory.
///
/// Numerical routines never panic on bad input or slow convergence; they
/// return one of these variants so callers (and the CLI) can report precisely
/// what failed and with which partial information.
#[derive(Debug, Error)]
pub enum LabError {
    /// An argument lies outside the mathematical domain of an operation
    /// (e.g. a non-positive order, a point off the half-line).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity is provably infinite for the requested parameters
    /// (e.g. the normalization integral at order λ ≤ 1/2).
    #[error("divergent quantity: {0}")]
    Divergent(String),

    /// An iterative scheme stopped before reaching the requested tolerance.
    /// Carries the best value found and the estimated remaining error so the
    /// caller can still inspect (but not silently use) the result.
    #[error("convergence failure in {context}: best value {value:.9e}, error estimate {estimate:.3e}")]
    Convergence {
        context: String,
        value: f64,
        estimate: f64,
    },

    /// An integrand or field evaluation produced a non-finite number.
    #[error("non-finite evaluation at {location:.9e}: {context}")]
    NonFinite { context: String, location: f64 },

    /// An input failed a documented precondition check and was rejected
    /// (e.g. boundary data failing the weighted integrability test).
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// An estimator produced a value but flagged it as unreliable
    /// (e.g. a norm still growing at the largest scale of the family).
    #[error("unstable estimate: {0}")]
    UnstableEstimate(String),

    /// Experiment configuration could not be parsed or is inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem or serialization failure while writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Convenience constructor for domain violations.
    pub fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }
}
