use thiserror::Error;

/// Errors produced by the solver, the bound computations and the
/// polynomial machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the system is convex.
    #[error("parameter domain violation: {0}")]
    Domain(String),

    /// A structurally invalid system or polynomial description.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A factor of the product-form Bethe equations (or of the difference
    /// equation) vanished.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Newton iteration exhausted its budget.
    #[error("no convergence after {iterations} iterations (|grad|_inf = {grad_norm:e})")]
    NonConvergence {
        iterations: usize,
        grad_norm: f64,
        last: Vec<f64>,
    },

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    /// The bisection oracle could not bracket all zeros.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
