//! Unpreconditioned conjugate gradients for matrix-free SPD operators.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{dot, sqrt};

/// Outcome of a CG run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    /// `||b - A x|| / ||b||` from the recursively updated residual.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Work vectors for [`cg_solve`].
#[derive(Debug, Clone)]
pub struct CgWorkspace {
    r: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
}

impl CgWorkspace {
    pub fn new(n: usize) -> Self {
        Self {
            r: vec![0.0; n],
            p: vec![0.0; n],
            ap: vec![0.0; n],
        }
    }
}

/// Solves `A x = b` from the zero start vector, stopping once
/// `||r||_2 <= rel_tol ||b||_2`.
pub fn cg_solve<A>(
    mut apply: A,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
    ws: &mut CgWorkspace,
) -> CgOutcome
where
    A: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    debug_assert_eq!(x.len(), n);
    x.fill(0.0);
    let b_norm = sqrt(dot(b, b));
    if b_norm == 0.0 {
        return CgOutcome {
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }
    let CgWorkspace { r, p, ap } = ws;
    r.copy_from_slice(b);
    p.copy_from_slice(b);
    let mut rr = dot(r, r);
    let target = rel_tol * b_norm;
    let mut iterations = 0;
    while iterations < max_iter {
        if sqrt(rr) <= target {
            break;
        }
        apply(p, ap);
        let pap = dot(p, ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(r, r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        iterations += 1;
    }
    let rel = sqrt(rr) / b_norm;
    CgOutcome {
        iterations,
        relative_residual: rel,
        converged: sqrt(rr) <= target,
    }
}
