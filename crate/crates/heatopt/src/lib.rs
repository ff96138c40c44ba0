//! Refinement studies for the space-time optimal control solver in
//! [`heatopt_core`]: level sweeps with `rho = h_x^2`, error and eoc
//! bookkeeping, and CSV output of convergence and timing tables.

mod error;
mod output;
mod plan;
mod study;

pub use error::StudyError;
pub use output::{emit_csv, emit_field, emit_timing_series, write_csv, write_field, write_timing_series, HEADER};
pub use plan::{ExperimentPlan, Scaling, DEFAULT_MAX_DOFS};
pub use study::{eoc, run_study, run_study_with, LevelSolution, ResultRow, STABILITY_SLACK};
