use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation failed after {terms} terms (partial value {partial:e})")]
    TruncationFailure { partial: f64, terms: usize },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("quadrature did not converge after {nodes} nodes (best value {best:e}, last delta {delta:e})")]
    QuadratureFailure { best: f64, delta: f64, nodes: usize },

    #[error("moment determinant is numerically singular: {0}")]
    Conditioning(String),

    #[error("parameters violate the AT condition: alpha_{i} - alpha_{j} is within {tol} of an integer")]
    AtCondition { i: usize, j: usize, tol: f64 },

    #[error("order cap exceeded: requested {requested}, cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("parameter a = 0 has no rescaled form; use the generating-function path")]
    UseGeneratingFunction,

    #[error("evaluation point {x} is too close to a zero of the prefactor")]
    EvaluationPoint { x: f64 },
}

pub type Result<T> = std::result::Result<T, QError>;
