use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An iterative expansion did not reach working precision within its budget.
    #[error("{method} did not converge after {iterations} iterations")]
    Convergence {
        method: &'static str,
        iterations: usize,
    },

    #[error("amplitude too close to zero for a reliable ratio (|I| = {modulus:e})")]
    NearZeroAmplitude { modulus: f64 },

    #[error("quadrature tolerance not met: estimated error {estimate:e} after {subdivisions} subdivisions")]
    ToleranceNotMet { estimate: f64, subdivisions: usize },

    #[error("no sign change of the cross-over condition in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("root finder stopped after {iterations} iterations with residual {residual:e}")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("result overflows double precision: {0}")]
    Overflow(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
