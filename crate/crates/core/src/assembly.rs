//! Space-time fields, load vector assembly and `L^2(Q)` error functionals.
//!
//! Integrals are evaluated element by element with tensor Gauss rules. Shape
//! functions are applied by sum factorization: the `2^(d+1)` local coefficients
//! are expanded to quadrature points (and point values contracted back) one
//! axis at a time.

use alloc::vec;
use alloc::vec::Vec;

use crate::quadrature::{QuadratureRule, Rule1d};
use crate::spatial::SpatialGrid;
use crate::targets::TargetSpec;
use crate::temporal::TemporalMesh;
use crate::{Error, Result};

/// Coefficients of a function in `W_hx (x) V_ht`, stored time-major: block `i`
/// holds the `M_x` spatial coefficients at temporal node `t_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: SpatialGrid,
    mesh: TemporalMesh,
    coeffs: Vec<f64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: SpatialGrid, mesh: TemporalMesh) -> Self {
        Self {
            grid,
            mesh,
            coeffs: vec![0.0; grid.dofs() * mesh.dofs()],
        }
    }

    pub fn from_vec(grid: SpatialGrid, mesh: TemporalMesh, coeffs: Vec<f64>) -> Result<Self> {
        let expected = grid.dofs() * mesh.dofs();
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, mesh, coeffs })
    }

    /// Nodal interpolant of `f(x, t)`.
    pub fn interpolate<F: Fn(&[f64], f64) -> f64>(grid: SpatialGrid, mesh: TemporalMesh, f: F) -> Self {
        let m_x = grid.dofs();
        let d = grid.dim();
        let mut coeffs = vec![0.0; m_x * mesh.dofs()];
        for (i, block) in coeffs.chunks_mut(m_x).enumerate() {
            let t = mesh.node(i + 1);
            for (k, c) in block.iter_mut().enumerate() {
                *c = f(&grid.node_coords(k)[..d], t);
            }
        }
        Self { grid, mesh, coeffs }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn mesh(&self) -> &TemporalMesh {
        &self.mesh
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn block(&self, i: usize) -> &[f64] {
        let m = self.grid.dofs();
        &self.coeffs[i * m..(i + 1) * m]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut [f64] {
        let m = self.grid.dofs();
        &mut self.coeffs[i * m..(i + 1) * m]
    }

    pub fn same_discretization(&self, other: &Self) -> bool {
        self.grid == other.grid && self.mesh == other.mesh
    }

    pub fn dot(&self, other: &Self) -> f64 {
        crate::math::dot(&self.coeffs, &other.coeffs)
    }

    pub fn norm(&self) -> f64 {
        crate::math::norm2(&self.coeffs)
    }
}

/// Where integrands lose smoothness; drives the per-element rule choice.
#[derive(Debug, Clone, Copy, Default)]
pub struct Irregularity<'a> {
    pub space_jumps: &'a [f64],
    pub time_jumps: &'a [f64],
    pub endpoint_singular: bool,
}

impl<'a> Irregularity<'a> {
    pub fn of(target: &TargetSpec) -> Self {
        Self {
            space_jumps: target.space_jumps(),
            time_jumps: target.time_jumps(),
            endpoint_singular: target.has_endpoint_singularity(),
        }
    }
}

fn check_dim(grid: &SpatialGrid, target: &TargetSpec) -> Result<()> {
    if grid.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            got: grid.dim(),
        });
    }
    Ok(())
}

/// `f[j, k] = int_Q target * psi_k * phi_j`.
pub fn assemble_rhs(
    grid: &SpatialGrid,
    mesh: &TemporalMesh,
    target: &TargetSpec,
    quad: &QuadratureRule,
) -> Result<SpaceTimeField> {
    check_dim(grid, target)?;
    Ok(assemble_load(grid, mesh, quad, Irregularity::of(target), |x, t| {
        target.evaluate(x, t)
    }))
}

/// `f[j, k] = int_Q g * psi_k * phi_j` for an arbitrary integrand.
pub fn assemble_load<F>(
    grid: &SpatialGrid,
    mesh: &TemporalMesh,
    quad: &QuadratureRule,
    irregularity: Irregularity<'_>,
    g: F,
) -> SpaceTimeField
where
    F: Fn(&[f64], f64) -> f64 + Sync,
{
    let integ = Integrator::new(*grid, *mesh, quad, irregularity);
    SpaceTimeField {
        grid: *grid,
        mesh: *mesh,
        coeffs: integ.load(None, |x, t, _| g(x, t)),
    }
}

/// `|| u_h - target ||_{L^2(Q)}`, evaluated with the refined error rule.
pub fn l2q_error(u: &SpaceTimeField, target: &TargetSpec, quad: &QuadratureRule) -> Result<f64> {
    check_dim(&u.grid, target)?;
    let integ = Integrator::new(u.grid, u.mesh, &quad.for_error(), Irregularity::of(target));
    let s = integ.scalar(Some(&u.coeffs), |x, t, uh| {
        let e = uh - target.evaluate(x, t);
        e * e
    });
    Ok(crate::math::sqrt(s))
}

/// `(|| u_h - target ||, || target ||^2)` from a single pass of the error rule.
pub fn l2q_error_and_norm_sq(u: &SpaceTimeField, target: &TargetSpec, quad: &QuadratureRule) -> Result<(f64, f64)> {
    check_dim(&u.grid, target)?;
    let integ = Integrator::new(u.grid, u.mesh, &quad.for_error(), Irregularity::of(target));
    let [err, norm] = integ.scalars(Some(&u.coeffs), |x, t, uh| {
        let v = target.evaluate(x, t);
        [(uh - v) * (uh - v), v * v]
    });
    Ok((crate::math::sqrt(err), norm))
}

/// `|| target ||^2_{L^2(Q)}` with the error rule.
pub fn target_l2q_norm_sq(
    grid: &SpatialGrid,
    mesh: &TemporalMesh,
    target: &TargetSpec,
    quad: &QuadratureRule,
) -> Result<f64> {
    check_dim(grid, target)?;
    let integ = Integrator::new(*grid, *mesh, &quad.for_error(), Irregularity::of(target));
    Ok(integ.scalar(None, |x, t, _| {
        let v = target.evaluate(x, t);
        v * v
    }))
}

/// `|| u_h - f ||_{L^2(Q)}` for an arbitrary reference function.
pub fn l2q_error_fn<F>(u: &SpaceTimeField, quad: &QuadratureRule, f: F) -> f64
where
    F: Fn(&[f64], f64) -> f64 + Sync,
{
    let integ = Integrator::new(u.grid, u.mesh, &quad.for_error(), Irregularity::default());
    crate::math::sqrt(integ.scalar(Some(&u.coeffs), |x, t, uh| {
        let e = uh - f(x, t);
        e * e
    }))
}

/// Load vector `int_Q g(x, t, u_h) psi_k phi_j` for a pointwise integrand that
/// may depend on the discrete field `u`.
pub fn nonlinear_load<G>(u: &SpaceTimeField, quad: &QuadratureRule, g: G) -> SpaceTimeField
where
    G: Fn(&[f64], f64, f64) -> f64 + Sync,
{
    let integ = Integrator::new(u.grid, u.mesh, quad, Irregularity::default());
    let load = integ.load(Some(&u.coeffs), g);
    SpaceTimeField {
        grid: u.grid,
        mesh: u.mesh,
        coeffs: load,
    }
}

/// Rule on `[0, 1]` with the linear shape function values at its nodes.
#[derive(Debug, Clone)]
struct ShapeRule {
    rule: Rule1d,
    /// Row-major `len x 2`: `[1 - s_q, s_q]`.
    expand: Vec<f64>,
    /// Row-major `2 x len`.
    contract: Vec<f64>,
}

impl ShapeRule {
    fn new(rule: Rule1d) -> Self {
        let n = rule.len();
        let mut expand = vec![0.0; 2 * n];
        let mut contract = vec![0.0; 2 * n];
        for (q, &s) in rule.nodes.iter().enumerate() {
            expand[2 * q] = 1.0 - s;
            expand[2 * q + 1] = s;
            contract[q] = 1.0 - s;
            contract[n + q] = s;
        }
        Self { rule, expand, contract }
    }

    fn len(&self) -> usize {
        self.rule.len()
    }
}

struct Integrator<'a> {
    grid: SpatialGrid,
    mesh: TemporalMesh,
    irregular: Irregularity<'a>,
    space_plain: ShapeRule,
    space_cut: ShapeRule,
    time_plain: ShapeRule,
    time_cut: ShapeRule,
    time_endpoint: ShapeRule,
}

/// Per-worker buffers.
#[derive(Default)]
struct Scratch {
    values: Vec<f64>,
    tmp: Vec<f64>,
    xs: Vec<[f64; 3]>,
    ws: Vec<f64>,
    xs_next: Vec<[f64; 3]>,
    ws_next: Vec<f64>,
}

fn is_cut(lo: f64, hi: f64, jumps: &[f64]) -> bool {
    let eps = 1e-12 * (hi - lo);
    jumps.iter().any(|&c| c > lo + eps && c < hi - eps)
}

/// Applies `mat` (`rows x dims[axis]`, row-major) along `axis` of a row-major
/// tensor with shape `dims`, writing into `out` and updating `dims`.
fn apply_axis(input: &[f64], dims: &mut [usize], axis: usize, mat: &[f64], rows: usize, out: &mut Vec<f64>) {
    let cols = dims[axis];
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    out.clear();
    out.resize(outer * rows * inner, 0.0);
    for o in 0..outer {
        let src = &input[o * cols * inner..(o + 1) * cols * inner];
        let dst = &mut out[o * rows * inner..(o + 1) * rows * inner];
        for r in 0..rows {
            let d = &mut dst[r * inner..(r + 1) * inner];
            for c in 0..cols {
                let a = mat[r * cols + c];
                let s = &src[c * inner..(c + 1) * inner];
                for (x, y) in d.iter_mut().zip(s) {
                    *x += a * y;
                }
            }
        }
    }
    dims[axis] = rows;
}

impl<'a> Integrator<'a> {
    fn new(grid: SpatialGrid, mesh: TemporalMesh, quad: &QuadratureRule, irregular: Irregularity<'a>) -> Self {
        let qs = quad.points_per_axis_space;
        let qt = quad.points_per_axis_time;
        Self {
            grid,
            mesh,
            irregular,
            space_plain: ShapeRule::new(Rule1d::gauss(qs)),
            space_cut: ShapeRule::new(Rule1d::composite(qs, quad.subdivisions)),
            time_plain: ShapeRule::new(Rule1d::gauss(qt)),
            time_cut: ShapeRule::new(Rule1d::composite(qt, quad.subdivisions)),
            time_endpoint: ShapeRule::new(Rule1d::gauss(quad.endpoint_points_time)),
        }
    }

    fn time_rule(&self, n: usize) -> &ShapeRule {
        let h = self.mesh.h_t();
        let (lo, hi) = (n as f64 * h, (n + 1) as f64 * h);
        if is_cut(lo, hi, self.irregular.time_jumps) {
            &self.time_cut
        } else if self.irregular.endpoint_singular && (n == 0 || n + 1 == self.mesh.n_t()) {
            &self.time_endpoint
        } else {
            &self.time_plain
        }
    }

    fn space_rule(&self, e: usize) -> &ShapeRule {
        let h = self.grid.h_x();
        if is_cut(e as f64 * h, (e + 1) as f64 * h, self.irregular.space_jumps) {
            &self.space_cut
        } else {
            &self.space_plain
        }
    }

    /// Loops over the elements of time slab `n`. For each element `visit`
    /// receives the global indices of the `2^(d+1)` local basis functions
    /// (`None` where the node carries a boundary condition), the shape rules
    /// per axis (slow to fast: time, x_d, ..., x_1), and the scratch space.
    fn slab<V>(&self, n: usize, s: &mut Scratch, mut visit: V)
    where
        V: FnMut(&[Option<usize>], &[&ShapeRule], f64, &mut Scratch),
    {
        let d = self.grid.dim();
        let nx = self.grid.n_x();
        let m = self.grid.m_per_axis();
        let m_x = self.grid.dofs();
        let n_elem = nx.pow(d as u32);
        let local_n = 1usize << (d + 1);
        let mut idx = vec![None; local_n];
        let t_rule = self.time_rule(n);
        let time_dof = [n.checked_sub(1), Some(n)];
        let measure = self.mesh.h_t() * crate::math::powi(self.grid.h_x(), d as i32);
        let mut rules: Vec<&ShapeRule> = Vec::with_capacity(d + 1);
        for flat in 0..n_elem {
            let mut e = [0usize; 3];
            let mut rest = flat;
            for slot in e.iter_mut().take(d) {
                *slot = rest % nx;
                rest /= nx;
            }
            for (local, slot) in idx.iter_mut().enumerate() {
                let a_t = local >> d;
                let mut g = time_dof[a_t].map(|td| td * m_x);
                let mut stride = 1;
                for (k, &ek) in e.iter().enumerate().take(d) {
                    let node = ek + ((local >> k) & 1);
                    g = match g {
                        Some(base) if node >= 1 && node <= m => Some(base + (node - 1) * stride),
                        _ => None,
                    };
                    stride *= m;
                }
                *slot = g;
            }
            rules.clear();
            rules.push(t_rule);
            for k in (0..d).rev() {
                rules.push(self.space_rule(e[k]));
            }
            // spatial points, x_1 fastest
            let h = self.grid.h_x();
            s.xs.clear();
            s.ws.clear();
            s.xs.push([0.0; 3]);
            s.ws.push(1.0);
            for k in (0..d).rev() {
                let r = &rules[d - k].rule;
                s.xs_next.clear();
                s.ws_next.clear();
                for (px, pw) in s.xs.iter().zip(&s.ws) {
                    for (node, w) in r.nodes.iter().zip(&r.weights) {
                        let mut x = *px;
                        x[k] = (e[k] as f64 + node) * h;
                        s.xs_next.push(x);
                        s.ws_next.push(pw * w);
                    }
                }
                core::mem::swap(&mut s.xs, &mut s.xs_next);
                core::mem::swap(&mut s.ws, &mut s.ws_next);
            }
            visit(&idx, &rules, measure, s);
        }
    }

    /// Expands local coefficients to point values in `s.values`.
    fn expand(coeffs: &[f64], idx: &[Option<usize>], rules: &[&ShapeRule], s: &mut Scratch) {
        s.values.clear();
        s.values.extend(idx.iter().map(|g| g.map_or(0.0, |g| coeffs[g])));
        let mut dims = [2usize; 4];
        let dims = &mut dims[..rules.len()];
        for (axis, r) in rules.iter().enumerate() {
            apply_axis(&s.values, dims, axis, &r.expand, r.len(), &mut s.tmp);
            core::mem::swap(&mut s.values, &mut s.tmp);
        }
    }

    /// Contracts `s.values` against the local shape functions, leaving the
    /// `2^(d+1)` local integrals in `s.values`.
    fn contract(rules: &[&ShapeRule], s: &mut Scratch) {
        let mut dims = [0usize; 4];
        for (d, r) in dims.iter_mut().zip(rules) {
            *d = r.len();
        }
        let dims = &mut dims[..rules.len()];
        for (axis, r) in rules.iter().enumerate() {
            apply_axis(&s.values, dims, axis, &r.contract, 2, &mut s.tmp);
            core::mem::swap(&mut s.values, &mut s.tmp);
        }
    }

    /// Fills `s.values` with `weight * g(x, t, u_h)` at every quadrature point.
    #[allow(clippy::too_many_arguments)]
    fn sample<G>(
        &self,
        n: usize,
        coeffs: Option<&[f64]>,
        idx: &[Option<usize>],
        rules: &[&ShapeRule],
        measure: f64,
        s: &mut Scratch,
        g: &G,
    ) where
        G: Fn(&[f64], f64, f64) -> f64,
    {
        let d = self.grid.dim();
        let np_space = s.xs.len();
        let tr = &rules[0].rule;
        let np = tr.len() * np_space;
        match coeffs {
            Some(c) => Self::expand(c, idx, rules, s),
            None => {
                s.values.clear();
                s.values.resize(np, 0.0);
            }
        }
        let h_t = self.mesh.h_t();
        for (qt, (node, wt)) in tr.nodes.iter().zip(&tr.weights).enumerate() {
            let t = (n as f64 + node) * h_t;
            let row = &mut s.values[qt * np_space..(qt + 1) * np_space];
            for ((v, x), w) in row.iter_mut().zip(&s.xs).zip(&s.ws) {
                *v = g(&x[..d], t, *v) * w * wt * measure;
            }
        }
    }

    fn load<G>(&self, coeffs: Option<&[f64]>, g: G) -> Vec<f64>
    where
        G: Fn(&[f64], f64, f64) -> f64 + Sync,
    {
        let m_x = self.grid.dofs();
        let n_t = self.mesh.n_t();
        // Per slab: contributions to the blocks of time nodes n and n + 1.
        let parts = crate::par::map_range(n_t, |n| {
            let mut s = Scratch::default();
            let mut left = vec![0.0; m_x];
            let mut right = vec![0.0; m_x];
            self.slab(n, &mut s, |idx, rules, measure, s| {
                self.sample(n, coeffs, idx, rules, measure, s, &g);
                Self::contract(rules, s);
                let half = idx.len() / 2;
                for (l, gi) in idx.iter().enumerate() {
                    if let Some(gi) = gi {
                        if l < half {
                            left[gi - (n - 1) * m_x] += s.values[l];
                        } else {
                            right[gi - n * m_x] += s.values[l];
                        }
                    }
                }
            });
            (left, right)
        });
        let mut out = vec![0.0; m_x * n_t];
        for (n, (left, right)) in parts.into_iter().enumerate() {
            if n >= 1 {
                for (o, v) in out[(n - 1) * m_x..n * m_x].iter_mut().zip(&left) {
                    *o += v;
                }
            }
            for (o, v) in out[n * m_x..(n + 1) * m_x].iter_mut().zip(&right) {
                *o += v;
            }
        }
        out
    }

    fn scalar<G>(&self, coeffs: Option<&[f64]>, g: G) -> f64
    where
        G: Fn(&[f64], f64, f64) -> f64 + Sync,
    {
        self.scalars(coeffs, |x, t, uh| [g(x, t, uh)])[0]
    }

    /// Several integrals `int_Q g_k(x, t, u_h)` from one pass over the points.
    fn scalars<const K: usize, G>(&self, coeffs: Option<&[f64]>, g: G) -> [f64; K]
    where
        G: Fn(&[f64], f64, f64) -> [f64; K] + Sync,
    {
        let d = self.grid.dim();
        let h_t = self.mesh.h_t();
        let parts = crate::par::map_range(self.mesh.n_t(), |n| {
            let mut s = Scratch::default();
            let mut acc = [0.0; K];
            self.slab(n, &mut s, |idx, rules, measure, s| {
                let np_space = s.xs.len();
                let tr = &rules[0].rule;
                match coeffs {
                    Some(c) => Self::expand(c, idx, rules, s),
                    None => {
                        s.values.clear();
                        s.values.resize(tr.len() * np_space, 0.0);
                    }
                }
                for (qt, (node, wt)) in tr.nodes.iter().zip(&tr.weights).enumerate() {
                    let t = (n as f64 + node) * h_t;
                    let row = &s.values[qt * np_space..(qt + 1) * np_space];
                    for ((uh, x), w) in row.iter().zip(&s.xs).zip(&s.ws) {
                        let scale = w * wt * measure;
                        for (a, v) in acc.iter_mut().zip(g(&x[..d], t, *uh)) {
                            *a += v * scale;
                        }
                    }
                }
            });
            acc
        });
        let mut total = [0.0; K];
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        total
    }
}
