//! Space-time system `K_h u = f` and its fast direct solver.
//!
//! With `C` the temporal eigenvector matrix and `D = diag(lambda_l)` the
//! temporal eigenvalues, `M_t^{-1} A_t = C D C^{-1}`. Left-multiplying the system
//! by `C^{-1} M_t^{-1} (x) I` decouples it into `N_t` spatial problems
//!
//! ```text
//! ((1 + rho lambda_l) M_x + rho A_x) v_l = g_l,   g = (C^{-1} M_t^{-1} (x) I) f,
//! ```
//!
//! and `u = (C (x) I) v`. Transforms in time act on the `M_x` temporal fibers
//! independently; the spatial problems are solved by unpreconditioned CG.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::assembly::SpaceTimeField;
use crate::cg::{cg_solve, CgOutcome, CgWorkspace};
use crate::dst::{DstPlan, DstScratch};
use crate::math::norm2;
use crate::par;
use crate::spatial::{SpatialGrid, SpatialOperator, SpatialWorkspace};
use crate::temporal::{TemporalEigenSystem, TemporalMesh};
use crate::tridiag::{TridiagLu, TridiagonalSym};
use crate::{Error, Result};

/// Relative residual above which a direct solve is rejected.
pub const RESIDUAL_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Regularization parameter `rho`.
    pub rho: f64,
    /// Relative residual tolerance of every CG run.
    pub cg_rel_tol: f64,
    /// Iteration cap per CG run; `None` selects a size-dependent default.
    pub cg_max_iter: Option<usize>,
    /// Keep the per-channel iteration counts in the report.
    pub record_iterations: bool,
}

impl SolverConfig {
    pub fn new(rho: f64) -> Self {
        Self {
            rho,
            cg_rel_tol: 1e-12,
            cg_max_iter: None,
            record_iterations: false,
        }
    }

    /// `rho = h_x^2`.
    pub fn for_grid(grid: &SpatialGrid) -> Self {
        Self::new(grid.h_x() * grid.h_x())
    }

    fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return Err(Error::InvalidParameter("rho must be finite and non-negative"));
        }
        if self.cg_rel_tol.is_nan() || self.cg_rel_tol <= 0.0 {
            return Err(Error::InvalidParameter("CG tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: SpaceTimeField,
    pub cg_iter_mean: f64,
    /// Population variance of the per-channel iteration counts.
    pub cg_iter_var: f64,
    /// Wall clock of the solve (zero without the `std` feature).
    pub wall_time: Duration,
    /// `||K_h u - f|| / ||f||` from an independent operator application.
    pub residual_norm: f64,
    pub cg_iterations: Option<Vec<usize>>,
}

/// Discretized space-time operator with everything needed to apply and
/// invert `K_h` for any `rho`.
#[derive(Debug, Clone)]
pub struct SpaceTimeOperator {
    spatial: SpatialOperator,
    eig: TemporalEigenSystem,
    mass_t: TridiagonalSym,
    mass_t_lu: TridiagLu,
    dst: DstPlan,
}

struct Timer {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Timer {
    fn start() -> Self {
        Self {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(feature = "std")]
        {
            self.start.elapsed()
        }
        #[cfg(not(feature = "std"))]
        {
            Duration::ZERO
        }
    }
}

impl SpaceTimeOperator {
    pub fn new(grid: SpatialGrid, mesh: TemporalMesh) -> Self {
        Self::with_eigensystem(grid, TemporalEigenSystem::new(&mesh))
    }

    pub fn with_eigensystem(grid: SpatialGrid, eig: TemporalEigenSystem) -> Self {
        let mesh = *eig.mesh();
        let mass_t = mesh.mass_matrix();
        let mass_t_lu = mass_t.factor();
        Self {
            spatial: SpatialOperator::new(grid),
            dst: DstPlan::new(mesh.dofs()),
            eig,
            mass_t,
            mass_t_lu,
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        self.spatial.grid()
    }

    pub fn mesh(&self) -> &TemporalMesh {
        self.eig.mesh()
    }

    pub fn spatial(&self) -> &SpatialOperator {
        &self.spatial
    }

    pub fn eigensystem(&self) -> &TemporalEigenSystem {
        &self.eig
    }

    pub fn temporal_mass(&self) -> &TridiagonalSym {
        &self.mass_t
    }

    pub fn dofs(&self) -> usize {
        self.spatial.dofs() * self.mesh().dofs()
    }

    fn check(&self, u: &SpaceTimeField) -> Result<()> {
        if u.grid() != self.grid() || u.mesh() != self.mesh() {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    fn default_spatial_max_iter(&self) -> usize {
        10 * self.grid().m_per_axis()
    }

    /// `y = K_h u`.
    pub fn apply_kh(&self, rho: f64, u: &SpaceTimeField) -> Result<SpaceTimeField> {
        self.check(u)?;
        let mut out = SpaceTimeField::zeros(*self.grid(), *self.mesh());
        self.apply_kh_into(rho, u.coeffs(), out.coeffs_mut());
        Ok(out)
    }

    /// `y = (M_t (x) M_x) u`.
    pub fn apply_mass(&self, u: &SpaceTimeField) -> Result<SpaceTimeField> {
        self.check(u)?;
        let mut out = SpaceTimeField::zeros(*self.grid(), *self.mesh());
        self.apply_kh_into(0.0, u.coeffs(), out.coeffs_mut());
        Ok(out)
    }

    /// `u^T K_h u = ||u_h||^2 + rho ||u_h||_D^2`.
    pub fn energy(&self, rho: f64, u: &SpaceTimeField) -> Result<f64> {
        Ok(self.apply_kh(rho, u)?.dot(u))
    }

    /// `K_h u = (M_t (x) I) [P + rho Q + rho (C D C^{-1} (x) I) P]` with
    /// `P = (I (x) M_x) u` and `Q = (I (x) A_x) u`.
    pub(crate) fn apply_kh_into(&self, rho: f64, u: &[f64], y: &mut [f64]) {
        let m_x = self.spatial.dofs();
        let n_t = self.mesh().dofs();
        let mut pq = vec![0.0; 2 * m_x * n_t];
        par::for_each_chunk_with(
            &mut pq,
            2 * m_x,
            || self.spatial.workspace(),
            |ws: &mut SpatialWorkspace, i, chunk| {
                let (p, q) = chunk.split_at_mut(m_x);
                self.spatial.apply_both(&u[i * m_x..(i + 1) * m_x], ws);
                let (wp, wq) = ws.results();
                p.copy_from_slice(wp);
                q.copy_from_slice(wq);
            },
        );
        // fibers: [p_k (n_t) | q_k (n_t)]
        let mut fib = vec![0.0; 2 * m_x * n_t];
        for i in 0..n_t {
            let p = &pq[2 * i * m_x..(2 * i + 1) * m_x];
            let q = &pq[(2 * i + 1) * m_x..(2 * i + 2) * m_x];
            for k in 0..m_x {
                fib[2 * k * n_t + i] = p[k];
                fib[(2 * k + 1) * n_t + i] = q[k];
            }
        }
        drop(pq);
        let lambdas = self.eig.lambdas();
        par::for_each_chunk_with(
            &mut fib,
            2 * n_t,
            || (self.dst.scratch(), vec![0.0; n_t], vec![0.0; n_t]),
            |(s, g, w): &mut (DstScratch, Vec<f64>, Vec<f64>), _, chunk| {
                let (p, q) = chunk.split_at_mut(n_t);
                g.copy_from_slice(p);
                if rho != 0.0 {
                    self.dst.inverse(g, s);
                    for (gl, l) in g.iter_mut().zip(lambdas) {
                        *gl *= l;
                    }
                    self.dst.forward(g, s);
                    for i in 0..n_t {
                        g[i] = p[i] + rho * (q[i] + g[i]);
                    }
                }
                self.mass_t.apply(g, w);
                p.copy_from_slice(w);
            },
        );
        for k in 0..m_x {
            for i in 0..n_t {
                y[i * m_x + k] = fib[2 * k * n_t + i];
            }
        }
    }

    /// Applies `f` to every temporal fiber of the time-major `data`.
    fn map_fibers<F>(&self, data: &mut [f64], f: F)
    where
        F: Fn(&mut [f64], &mut DstScratch) + Sync + Send,
    {
        let m_x = self.spatial.dofs();
        let n_t = self.mesh().dofs();
        let mut fib = vec![0.0; data.len()];
        par::transpose(data, n_t, m_x, &mut fib);
        par::for_each_chunk_with(&mut fib, n_t, || self.dst.scratch(), |s, _, fiber| f(fiber, s));
        par::transpose(&fib, m_x, n_t, data);
    }

    /// Fast direct solve of `K_h u = f`.
    pub fn solve_direct(&self, cfg: &SolverConfig, f: &SpaceTimeField) -> Result<SolveReport> {
        cfg.validate()?;
        self.check(f)?;
        let timer = Timer::start();
        let m_x = self.spatial.dofs();
        let rho = cfg.rho;
        let max_iter = cfg.cg_max_iter.unwrap_or_else(|| self.default_spatial_max_iter());

        // g = (C^{-1} M_t^{-1} (x) I) f
        let mut data = f.coeffs().to_vec();
        self.map_fibers(&mut data, |fiber, s| {
            self.mass_t_lu.solve_in_place(fiber);
            self.dst.inverse(fiber, s);
        });

        // ((1 + rho lambda_l) M_x + rho A_x) v_l = g_l
        let lambdas = self.eig.lambdas();
        let outcomes: Vec<CgOutcome> = par::map_chunks_with(
            &mut data,
            m_x,
            || (self.spatial.workspace(), CgWorkspace::new(m_x), vec![0.0; m_x]),
            |(sw, cw, rhs): &mut (SpatialWorkspace, CgWorkspace, Vec<f64>), l, chunk| {
                rhs.copy_from_slice(chunk);
                let lambda = lambdas[l];
                cg_solve(
                    |v, y| self.spatial.shifted_apply_into(rho, lambda, v, y, sw),
                    rhs,
                    chunk,
                    cfg.cg_rel_tol,
                    max_iter,
                    cw,
                )
            },
        );
        if let Some((l, o)) = outcomes.iter().enumerate().find(|(_, o)| !o.converged) {
            return Err(Error::CgNotConverged {
                channel: Some(l),
                max_iter,
                residual: o.relative_residual,
            });
        }

        // u = (C (x) I) v
        self.map_fibers(&mut data, |fiber, s| self.dst.forward(fiber, s));
        let wall_time = timer.elapsed();

        let solution = SpaceTimeField::from_vec(*self.grid(), *self.mesh(), data)?;
        let residual_norm = self.relative_residual(rho, &solution, f);
        if residual_norm.is_nan() || residual_norm > RESIDUAL_CHECK_TOL {
            return Err(Error::ResidualCheck(residual_norm));
        }
        let iters: Vec<usize> = outcomes.iter().map(|o| o.iterations).collect();
        let (mean, var) = mean_var(&iters);
        Ok(SolveReport {
            solution,
            cg_iter_mean: mean,
            cg_iter_var: var,
            wall_time,
            residual_norm,
            cg_iterations: cfg.record_iterations.then_some(iters),
        })
    }

    /// Unpreconditioned CG on the full space-time system.
    pub fn solve_global_cg(&self, cfg: &SolverConfig, f: &SpaceTimeField) -> Result<SolveReport> {
        cfg.validate()?;
        self.check(f)?;
        let timer = Timer::start();
        let n = self.dofs();
        let max_iter = cfg
            .cg_max_iter
            .unwrap_or_else(|| (10 * (self.grid().m_per_axis() + self.mesh().dofs())).max(2 * n));
        let mut x = vec![0.0; n];
        let outcome = cg_solve(
            |v, y| self.apply_kh_into(cfg.rho, v, y),
            f.coeffs(),
            &mut x,
            cfg.cg_rel_tol,
            max_iter,
            &mut CgWorkspace::new(n),
        );
        if !outcome.converged {
            return Err(Error::CgNotConverged {
                channel: None,
                max_iter,
                residual: outcome.relative_residual,
            });
        }
        let wall_time = timer.elapsed();
        let solution = SpaceTimeField::from_vec(*self.grid(), *self.mesh(), x)?;
        let residual_norm = self.relative_residual(cfg.rho, &solution, f);
        Ok(SolveReport {
            solution,
            cg_iter_mean: outcome.iterations as f64,
            cg_iter_var: 0.0,
            wall_time,
            residual_norm,
            cg_iterations: cfg.record_iterations.then(|| vec![outcome.iterations]),
        })
    }

    fn relative_residual(&self, rho: f64, u: &SpaceTimeField, f: &SpaceTimeField) -> f64 {
        let f_norm = f.norm();
        if f_norm == 0.0 {
            return u.norm();
        }
        let mut ku = vec![0.0; u.len()];
        self.apply_kh_into(rho, u.coeffs(), &mut ku);
        let r: Vec<f64> = ku.iter().zip(f.coeffs()).map(|(a, b)| a - b).collect();
        norm2(&r) / f_norm
    }
}

fn mean_var(xs: &[usize]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
    let var = xs.iter().map(|&x| (x as f64 - mean) * (x as f64 - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Fast direct solve; builds the operator from its parts.
pub fn solve_direct(
    grid: &SpatialGrid,
    eig: &TemporalEigenSystem,
    cfg: &SolverConfig,
    f: &SpaceTimeField,
) -> Result<SolveReport> {
    SpaceTimeOperator::with_eigensystem(*grid, eig.clone()).solve_direct(cfg, f)
}

/// Global CG solve; builds the operator from its parts.
pub fn solve_global_cg(
    grid: &SpatialGrid,
    eig: &TemporalEigenSystem,
    cfg: &SolverConfig,
    f: &SpaceTimeField,
) -> Result<SolveReport> {
    SpaceTimeOperator::with_eigensystem(*grid, eig.clone()).solve_global_cg(cfg, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(d: usize, nx: usize, nt: usize) -> SpaceTimeOperator {
        SpaceTimeOperator::new(SpatialGrid::new(d, nx).unwrap(), TemporalMesh::new(nt, 1.0).unwrap())
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let op = op(2, 4, 3);
        let f = SpaceTimeField::zeros(*op.grid(), *op.mesh());
        let r = op.solve_direct(&SolverConfig::for_grid(op.grid()), &f).unwrap();
        assert!(r.solution.coeffs().iter().all(|&v| v == 0.0));
        assert_eq!(r.cg_iter_mean, 0.0);
        let r = op.solve_global_cg(&SolverConfig::for_grid(op.grid()), &f).unwrap();
        assert_eq!(r.cg_iter_mean, 0.0);
    }

    #[test]
    fn rejects_negative_rho() {
        let op = op(1, 4, 2);
        let f = SpaceTimeField::zeros(*op.grid(), *op.mesh());
        assert!(op.solve_direct(&SolverConfig::new(-1.0), &f).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let op = op(1, 4, 2);
        let f = SpaceTimeField::zeros(SpatialGrid::new(1, 5).unwrap(), *op.mesh());
        assert_eq!(op.apply_kh(0.1, &f).unwrap_err(), Error::ShapeMismatch);
    }

    #[test]
    fn cg_cap_reports_channel() {
        let op = op(2, 8, 4);
        let mut f = SpaceTimeField::zeros(*op.grid(), *op.mesh());
        f.coeffs_mut()
            .iter_mut()
            .enumerate()
            .for_each(|(i, v)| *v = (i as f64).sin());
        let mut cfg = SolverConfig::new(1.0);
        cfg.cg_max_iter = Some(1);
        match op.solve_direct(&cfg, &f) {
            Err(Error::CgNotConverged {
                channel: Some(0),
                max_iter: 1,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mean_and_variance() {
        assert_eq!(mean_var(&[2, 4]), (3.0, 1.0));
    }
}
