//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("group structure error: {0}")]
    Group(String),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("Newton iteration failed: {0}")]
    Newton(NewtonFailure),

    #[error("continuation error: {0}")]
    Continuation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Why a Newton solve gave up. Callers along a branch treat all of these as
/// "shorten the step and retry".
#[derive(Debug, Clone, Error)]
pub enum NewtonFailure {
    #[error("no convergence after {iterations} iterations (|g| = {grad_norm:.3e})")]
    MaxIterations { iterations: usize, grad_norm: f64 },

    #[error("iterate diverged (|a| = {norm:.3e})")]
    Diverged { norm: f64 },

    #[error("converged onto a more symmetric solution (stabilizer grew)")]
    SymmetryCollapse,

    #[error("linear step failed: {0}")]
    LinearSolve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
