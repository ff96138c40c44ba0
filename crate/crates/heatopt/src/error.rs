use std::path::PathBuf;

use heatopt_core::TargetKind;

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error("no refinement levels given")]
    NoLevels,
    #[error("levels must be strictly increasing and at least 2, got {0:?}")]
    BadLevels(Vec<usize>),
    #[error("target {target} is defined for dim {expected}, not {got}")]
    Dimension {
        target: TargetKind,
        expected: usize,
        got: usize,
    },
    #[error("discontinuous target needs n_x divisible by 4 for aligned quadrature, got {0}")]
    Misaligned(usize),
    #[error("n_x={nx} needs {dofs} unknowns, above the budget of {limit}")]
    OverBudget { nx: usize, dofs: usize, limit: usize },
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("level n_x={nx}: {source}")]
    Solver {
        nx: usize,
        #[source]
        source: heatopt_core::Error,
    },
    #[error("level n_x={nx}: stability bound violated, u^T K u = {energy:e} > 1.01 * {target_sq:e}")]
    Stability { nx: usize, energy: f64, target_sq: f64 },
    #[error("nothing to write")]
    EmptyRows,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
