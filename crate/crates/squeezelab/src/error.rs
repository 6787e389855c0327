//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A coupling or observable overflowed the double range.
    #[error("coefficient overflow: {0}")]
    Overflow(String),

    /// The tridiagonal eigensolver failed to converge.
    #[error("eigensolver failed on dim {dim} (off-diagonal scale {scale:.3e}): {detail}")]
    Eigensolver {
        dim: usize,
        scale: f64,
        detail: String,
    },

    /// Krylov propagation could not meet the tolerance within the
    /// configured subspace dimension.
    #[error(
        "krylov propagation stalled: residual {residual:.3e} after {max_dim} vectors \
         at substep {substep:.3e}"
    )]
    KrylovStall {
        max_dim: usize,
        residual: f64,
        substep: f64,
    },

    /// The adaptive reference integrator drove its step below the
    /// representable range.
    #[error("reference integrator step underflow at r = {r:.6e} (step {step:.3e})")]
    StepUnderflow { r: f64, step: f64 },

    /// Scaling fit received degenerate or non-positive data.
    #[error("fit error: {0}")]
    Fit(String),

    /// A runtime numerical failure not covered by a more specific variant.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Reading or writing run artifacts failed.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
