use std::time::{Duration, Instant};

use heatopt_core::{
    assemble_rhs, assembly::l2q_error_and_norm_sq, QuadratureRule, SolverConfig, SpaceTimeField, SpaceTimeOperator,
    SpatialGrid, TemporalEigenSystem, TemporalMesh,
};

use crate::{ExperimentPlan, StudyError};

/// Slack on `u^T K_h u <= ||target||^2` for quadrature error.
pub const STABILITY_SLACK: f64 = 1.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dof: usize,
    pub nx: usize,
    pub nt: usize,
    pub l2_error: f64,
    /// `None` on the first level.
    pub eoc: Option<f64>,
    /// Eigenvalues, transforms and CG solves.
    pub simulation_time: Duration,
    /// Load vector assembly, not part of `simulation_time`.
    pub assembly_time: Duration,
    pub cg_iter_mean: f64,
    pub cg_iter_var: f64,
    pub residual: f64,
    /// `u^T K_h u`.
    pub energy: f64,
    /// `||target||^2_{L^2(Q)}`.
    pub target_norm_sq: f64,
}

impl ResultRow {
    pub fn simulation_ms(&self) -> f64 {
        self.simulation_time.as_secs_f64() * 1e3
    }

    pub fn time_per_dof_ns(&self) -> f64 {
        self.simulation_time.as_secs_f64() * 1e9 / self.dof as f64
    }
}

/// Output of one level besides its row.
#[derive(Debug, Clone)]
pub struct LevelSolution {
    pub rho: f64,
    pub state: SpaceTimeField,
}

/// `log(e_prev / e) / log(h_prev / h)`.
pub fn eoc(e_prev: f64, e: f64, h_prev: f64, h: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

/// Runs every level of `plan` with `rho = h_x^2`; the remaining solver
/// settings come from `template`.
pub fn run_study(plan: &ExperimentPlan, template: &SolverConfig) -> Result<Vec<ResultRow>, StudyError> {
    run_study_with(plan, template, &QuadratureRule::default(), |_, _| {})
}

/// As [`run_study`], handing each solved level to `visit`.
pub fn run_study_with<V>(
    plan: &ExperimentPlan,
    template: &SolverConfig,
    quad: &QuadratureRule,
    mut visit: V,
) -> Result<Vec<ResultRow>, StudyError>
where
    V: FnMut(&ResultRow, LevelSolution),
{
    plan.validate()?;
    let target = plan.target_spec();
    let mut rows: Vec<ResultRow> = Vec::with_capacity(plan.levels.len());
    for &nx in &plan.levels {
        let ctx = |source| StudyError::Solver { nx, source };
        let grid = SpatialGrid::new(plan.dim, nx).map_err(ctx)?;
        let mesh = TemporalMesh::new(plan.scaling.n_t(nx), plan.t_end).map_err(ctx)?;
        let rho = grid.h_x() * grid.h_x();
        let cfg = SolverConfig { rho, ..*template };

        let start = Instant::now();
        let f = assemble_rhs(&grid, &mesh, &target, quad).map_err(ctx)?;
        let assembly_time = start.elapsed();

        let start = Instant::now();
        let op = SpaceTimeOperator::with_eigensystem(grid, TemporalEigenSystem::new(&mesh));
        let setup = start.elapsed();
        let report = op.solve_direct(&cfg, &f).map_err(ctx)?;
        let simulation_time = setup + report.wall_time;

        let (l2_error, target_norm_sq) = l2q_error_and_norm_sq(&report.solution, &target, quad).map_err(ctx)?;
        let energy = op.energy(rho, &report.solution).map_err(ctx)?;
        if energy.is_nan() || energy > STABILITY_SLACK * target_norm_sq {
            return Err(StudyError::Stability {
                nx,
                energy,
                target_sq: target_norm_sq,
            });
        }

        let eoc = rows
            .last()
            .map(|p| eoc(p.l2_error, l2_error, 1.0 / p.nx as f64, grid.h_x()));
        let row = ResultRow {
            dof: op.dofs(),
            nx,
            nt: mesh.n_t(),
            l2_error,
            eoc,
            simulation_time,
            assembly_time,
            cg_iter_mean: report.cg_iter_mean,
            cg_iter_var: report.cg_iter_var,
            residual: report.residual_norm,
            energy,
            target_norm_sq,
        };
        visit(
            &row,
            LevelSolution {
                rho,
                state: report.solution,
            },
        );
        rows.push(row);
    }
    Ok(rows)
}
