use thiserror::Error;

/// Errors raised by the discretization and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty system")]
    Empty,

    #[error("invalid temporal mesh: {0}")]
    InvalidMesh(&'static str),

    #[error("invalid spatial grid: {0}")]
    InvalidGrid(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("dense assembly limited to {limit} unknowns, requested {requested}")]
    TooLarge { requested: usize, limit: usize },

    #[error("target is defined in {expected} space dimensions, grid has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("discretization mismatch between field and operator")]
    ShapeMismatch,

    #[error(
        "CG did not converge within {max_iter} iterations{}: relative residual {residual:e}",
        channel.map(|c| alloc::format!(" (time channel {c})")).unwrap_or_default()
    )]
    CgNotConverged {
        channel: Option<usize>,
        max_iter: usize,
        residual: f64,
    },

    #[error("direct solve residual check failed: relative residual {0:e} exceeds 1e-6")]
    ResidualCheck(f64),
}
