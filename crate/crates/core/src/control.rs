//! Control reconstruction `z_h = Q_h (B u_h [+ R(u_h)])` by `L^2(Q)` projection,
//! with `B u = d/dt u - Laplace u` evaluated weakly (integration by parts in
//! space).

use alloc::vec;

use crate::assembly::{nonlinear_load, SpaceTimeField};
use crate::quadrature::QuadratureRule;
use crate::spatial::SpatialOperator;
use crate::targets::reaction;
use crate::{Error, Result};

/// Solves `(M_t (x) M_x) z = b` with
/// `b_j = <d/dt u_h, psi phi_j> + <grad u_h, grad (psi phi_j)> [+ <R(u_h), psi phi_j>]`.
pub fn reconstruct_control(u: &SpaceTimeField, with_reaction: bool, quad: &QuadratureRule) -> Result<SpaceTimeField> {
    let grid = *u.grid();
    let mesh = *u.mesh();
    let spatial = SpatialOperator::new(grid);
    let m_x = grid.dofs();
    let n_t = mesh.dofs();

    // (I (x) M_x) u and (I (x) A_x) u per time block.
    let mut mu = vec![0.0; m_x * n_t];
    let mut au = vec![0.0; m_x * n_t];
    let mut ws = spatial.workspace();
    for i in 0..n_t {
        spatial.apply_both(u.block(i), &mut ws);
        let (p, q) = ws.results();
        mu[i * m_x..(i + 1) * m_x].copy_from_slice(p);
        au[i * m_x..(i + 1) * m_x].copy_from_slice(q);
    }

    // Temporal derivative matrix B_t[j][i] = <phi_i', phi_j>: -1/2 below the
    // diagonal, +1/2 above, 1/2 in the last diagonal entry.
    // Temporal mass M_t: h/6 [1, 4, 1], last diagonal h/3.
    let mass_t = mesh.mass_matrix();
    let mut b = SpaceTimeField::zeros(grid, mesh);
    {
        let out = b.coeffs_mut();
        for j in 0..n_t {
            let row = &mut out[j * m_x..(j + 1) * m_x];
            let mut add = |i: usize, cm: f64, ca: f64| {
                for ((o, m), a) in row
                    .iter_mut()
                    .zip(&mu[i * m_x..(i + 1) * m_x])
                    .zip(&au[i * m_x..(i + 1) * m_x])
                {
                    *o += cm * m + ca * a;
                }
            };
            let diag_b = if j + 1 == n_t { 0.5 } else { 0.0 };
            add(j, diag_b, mass_t.main[j]);
            if j > 0 {
                add(j - 1, -0.5, mass_t.off[j - 1]);
            }
            if j + 1 < n_t {
                add(j + 1, 0.5, mass_t.off[j]);
            }
        }
    }
    if with_reaction {
        let r = nonlinear_load(u, quad, |_, _, uh| reaction(uh));
        for (o, v) in b.coeffs_mut().iter_mut().zip(r.coeffs()) {
            *o += v;
        }
    }

    // (M_t (x) M_x)^{-1}: tridiagonal sweeps in time, tensor tridiagonal solves in space.
    let lu = mass_t.factor();
    let data = b.coeffs_mut();
    for k in 0..m_x {
        lu.solve_strided(data, k, m_x);
    }
    for i in 0..n_t {
        spatial
            .mass_solve_in_place(&mut data[i * m_x..(i + 1) * m_x])
            .map_err(|_| Error::ShapeMismatch)?;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::SpatialGrid;
    use crate::temporal::TemporalMesh;

    #[test]
    fn zero_state_zero_control() {
        let u = SpaceTimeField::zeros(SpatialGrid::new(2, 4).unwrap(), TemporalMesh::new(3, 1.0).unwrap());
        for with_reaction in [false, true] {
            let z = reconstruct_control(&u, with_reaction, &QuadratureRule::default()).unwrap();
            assert!(z.coeffs().iter().all(|&v| v == 0.0));
        }
    }
}
