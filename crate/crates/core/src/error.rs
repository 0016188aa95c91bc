use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Poles, domain violations and solver breakdowns are reported as values, never as
/// NaN propagation, so that callers can tell which parameter pushed a formula over an edge.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of {function} at x = {x}")]
    Pole { function: &'static str, x: f64 },

    #[error("{function} overflows at x = {x}")]
    Overflow { function: &'static str, x: f64 },

    #[error("domain error in {operation}: {detail}")]
    Domain {
        operation: &'static str,
        detail: String,
    },

    #[error("kernel is singular at tau = 1")]
    Singular,

    #[error("quadrature did not converge in {operation}: estimate {estimate:e}, error {error:e}")]
    QuadratureNonConvergence {
        operation: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("iteration did not converge in {operation} after {iterations} steps (last change {last_change:e})")]
    IterationNonConvergence {
        operation: &'static str,
        iterations: usize,
        last_change: f64,
    },

    #[error("system matrix is not positive definite for lambda = {lambda} (lambda too close to the discrete Hardy bound for this mesh)")]
    Indefinite { lambda: f64 },

    #[error("relative residual {relative:e} in {operation} exceeds 1e-10")]
    Residual { operation: &'static str, relative: f64 },

    #[error("iterate became negative ({value:e}) at node {node}")]
    Negativity { node: usize, value: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(operation: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            operation,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
