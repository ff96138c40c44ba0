//! Gauss-Legendre rules and the per-element quadrature policy.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{abs, cos};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one quadrature point");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-type initial guess, refined by Newton on P_n.
            let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if abs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule on the reference interval `[0, 1]` (weights sum to one) together with
/// the two linear shape functions `1 - s` and `s` at its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn gauss(n: usize) -> Self {
        Self::composite(n, 1)
    }

    /// `n`-point Gauss on each of `parts` equal subintervals.
    pub fn composite(n: usize, parts: usize) -> Self {
        let g = GaussLegendre::new(n);
        let parts = parts.max(1);
        let width = 1.0 / parts as f64;
        let mut nodes = Vec::with_capacity(n * parts);
        let mut weights = Vec::with_capacity(n * parts);
        for p in 0..parts {
            let a = p as f64 * width;
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                nodes.push(a + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Quadrature policy for load vectors and error functionals.
///
/// Elements cut by a jump of the target use a composite rule with
/// `subdivisions` parts along the cut axis. Time elements touching `t = 0` or
/// `t = T` use `endpoint_points_time` points for targets with endpoint
/// singularities. Error functionals add `error_extra_points` to every count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    pub points_per_axis_space: usize,
    pub points_per_axis_time: usize,
    pub subdivisions: usize,
    pub endpoint_points_time: usize,
    pub error_extra_points: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            points_per_axis_space: 3,
            points_per_axis_time: 3,
            subdivisions: 4,
            endpoint_points_time: 8,
            error_extra_points: 2,
        }
    }
}

impl QuadratureRule {
    /// The same policy with `extra` additional points everywhere.
    pub fn refined(&self, extra: usize) -> Self {
        Self {
            points_per_axis_space: self.points_per_axis_space + extra,
            points_per_axis_time: self.points_per_axis_time + extra,
            endpoint_points_time: self.endpoint_points_time + extra,
            ..*self
        }
    }

    /// The policy used for error functionals.
    pub fn for_error(&self) -> Self {
        self.refined(self.error_extra_points)
    }
}
