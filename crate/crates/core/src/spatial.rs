//! Tensor-product Q1 finite elements on the unit cube with homogeneous
//! Dirichlet conditions.
//!
//! Interior nodes are numbered lexicographically with `x_1` fastest. The
//! `d`-dimensional mass matrix is `M (x) ... (x) M` and the stiffness matrix is
//! the Kronecker sum of the 1D stiffness along each axis with 1D mass along the
//! others. Both are applied matrix-free by tridiagonal sweeps over fibers.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::tridiag::{TridiagLu, TridiagonalSym};
use crate::{Error, Result};

/// Largest spatial problem [`SpatialOperator::dense_assemble`] accepts.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    dim: usize,
    n_x: usize,
}

impl SpatialGrid {
    pub fn new(dim: usize, n_x: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid("dimension must be 1, 2 or 3"));
        }
        if n_x < 2 {
            return Err(Error::InvalidGrid("need at least two elements per axis"));
        }
        Ok(Self { dim, n_x })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn h_x(&self) -> f64 {
        1.0 / self.n_x as f64
    }

    /// Interior nodes per axis.
    pub fn m_per_axis(&self) -> usize {
        self.n_x - 1
    }

    /// Total number of spatial degrees of freedom `(n_x - 1)^d`.
    pub fn dofs(&self) -> usize {
        self.m_per_axis().pow(self.dim as u32)
    }

    /// Per-axis interior node indices (0-based) of a flat spatial index.
    pub fn unflatten(&self, mut idx: usize) -> [usize; 3] {
        let m = self.m_per_axis();
        let mut out = [0; 3];
        for slot in out.iter_mut().take(self.dim) {
            *slot = idx % m;
            idx /= m;
        }
        out
    }

    /// Coordinates of the interior node with flat index `idx`.
    pub fn node_coords(&self, idx: usize) -> [f64; 3] {
        let ix = self.unflatten(idx);
        let h = self.h_x();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = (ix[a] + 1) as f64 * h;
        }
        x
    }
}

/// Matrix-free mass and stiffness operators on a [`SpatialGrid`].
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    grid: SpatialGrid,
    mass1d: TridiagonalSym,
    stiff1d: TridiagonalSym,
    mass1d_lu: TridiagLu,
}

/// Buffers reused across applications of a [`SpatialOperator`].
#[derive(Debug, Clone)]
pub struct SpatialWorkspace {
    p: Vec<f64>,
    q: Vec<f64>,
    t: Vec<f64>,
}

impl SpatialWorkspace {
    /// `(M_x v, A_x v)` from the last [`SpatialOperator::apply_both`].
    pub(crate) fn results(&self) -> (&[f64], &[f64]) {
        (&self.p, &self.q)
    }
}

impl SpatialOperator {
    pub fn new(grid: SpatialGrid) -> Self {
        let m = grid.m_per_axis();
        let h = grid.h_x();
        let mass1d = TridiagonalSym::constant(m, 2.0 * h / 3.0, h / 6.0).expect("m >= 1");
        let stiff1d = TridiagonalSym::constant(m, 2.0 / h, -1.0 / h).expect("m >= 1");
        let mass1d_lu = mass1d.factor();
        Self {
            grid,
            mass1d,
            stiff1d,
            mass1d_lu,
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn mass1d(&self) -> &TridiagonalSym {
        &self.mass1d
    }

    pub fn stiff1d(&self) -> &TridiagonalSym {
        &self.stiff1d
    }

    pub fn dofs(&self) -> usize {
        self.grid.dofs()
    }

    pub fn workspace(&self) -> SpatialWorkspace {
        let n = self.dofs();
        SpatialWorkspace {
            p: vec![0.0; n],
            q: vec![0.0; n],
            t: vec![0.0; n],
        }
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dofs() {
            return Err(Error::LengthMismatch {
                expected: self.dofs(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `y = M_x v`.
    pub fn mass_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut ws = self.workspace();
        self.apply_both(v, &mut ws);
        Ok(ws.p)
    }

    /// `y = A_x v`.
    pub fn stiffness_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut ws = self.workspace();
        self.apply_both(v, &mut ws);
        Ok(ws.q)
    }

    /// `y = ((1 + rho lambda) M_x + rho A_x) v`.
    pub fn shifted_apply(&self, rho: f64, lambda: f64, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut y = vec![0.0; v.len()];
        self.shifted_apply_into(rho, lambda, v, &mut y, &mut self.workspace());
        Ok(y)
    }

    pub(crate) fn shifted_apply_into(
        &self,
        rho: f64,
        lambda: f64,
        v: &[f64],
        y: &mut [f64],
        ws: &mut SpatialWorkspace,
    ) {
        self.apply_both(v, ws);
        let c = 1.0 + rho * lambda;
        for ((out, p), q) in y.iter_mut().zip(&ws.p).zip(&ws.q) {
            *out = c * p + rho * q;
        }
    }

    /// Computes `M_x v` into `ws.p` and `A_x v` into `ws.q`.
    ///
    /// Axis by axis, with `P` the running mass product and `Q` the running
    /// Kronecker sum: `P' = M_a P`, `Q' = M_a Q + S_a P`.
    pub(crate) fn apply_both(&self, v: &[f64], ws: &mut SpatialWorkspace) {
        let SpatialWorkspace { p, q, t } = ws;
        sweep(&self.mass1d, &self.grid, 0, v, p);
        sweep(&self.stiff1d, &self.grid, 0, v, q);
        for axis in 1..self.grid.dim() {
            // q <- M_a q + S_a p ; p <- M_a p
            sweep(&self.mass1d, &self.grid, axis, q, t);
            sweep(&self.stiff1d, &self.grid, axis, p, q);
            for (a, b) in q.iter_mut().zip(t.iter()) {
                *a += *b;
            }
            sweep(&self.mass1d, &self.grid, axis, p, t);
            core::mem::swap(p, t);
        }
    }

    /// Solves `M_x y = rhs` in place by tridiagonal solves along each axis.
    pub fn mass_solve_in_place(&self, rhs: &mut [f64]) -> Result<()> {
        self.check_len(rhs)?;
        let m = self.grid.m_per_axis();
        let n = self.dofs();
        for axis in 0..self.grid.dim() {
            let stride = m.pow(axis as u32);
            let block = stride * m;
            for outer in (0..n).step_by(block) {
                for inner in 0..stride {
                    self.mass1d_lu.solve_strided(rhs, outer + inner, stride);
                }
            }
        }
        Ok(())
    }

    /// Explicit Kronecker assembly of `(M_x, A_x)`.
    pub fn dense_assemble(&self) -> Result<(DenseMatrix, DenseMatrix)> {
        let n = self.dofs();
        if n > DENSE_LIMIT {
            return Err(Error::TooLarge {
                requested: n,
                limit: DENSE_LIMIT,
            });
        }
        let m1 = self.mass1d.to_dense();
        let s1 = self.stiff1d.to_dense();
        let mut mass = m1.clone();
        let mut stiff = s1.clone();
        for _ in 1..self.grid.dim() {
            // slow axis prepended: new = X_new (x) old
            let new_stiff = s1.kron(&mass).add_scaled(1.0, &m1.kron(&stiff));
            mass = m1.kron(&mass);
            stiff = new_stiff;
        }
        Ok((mass, stiff))
    }
}

/// `out = T_axis x` where `T` acts along `axis` and identity elsewhere.
fn sweep(t: &TridiagonalSym, grid: &SpatialGrid, axis: usize, x: &[f64], out: &mut [f64]) {
    let m = grid.m_per_axis();
    let stride = m.pow(axis as u32);
    let block = stride * m;
    let n = x.len();
    for base in (0..n).step_by(block) {
        for j in 0..m {
            let row = base + j * stride;
            let d = t.main[j];
            let (dst, src) = (&mut out[row..row + stride], &x[row..row + stride]);
            for (o, s) in dst.iter_mut().zip(src) {
                *o = d * s;
            }
            if j > 0 {
                let l = t.off[j - 1];
                let prev = &x[row - stride..row];
                for (o, s) in dst.iter_mut().zip(prev) {
                    *o += l * s;
                }
            }
            if j + 1 < m {
                let u = t.off[j];
                let next = &x[row + stride..row + 2 * stride];
                for (o, s) in dst.iter_mut().zip(next) {
                    *o += u * s;
                }
            }
        }
    }
}
