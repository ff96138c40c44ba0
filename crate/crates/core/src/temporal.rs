//! Uniform temporal discretization and the closed-form eigen-decomposition of
//! the modified Hilbert transform stiffness matrix.
//!
//! Trial functions are continuous piecewise linear hats on `(0, T)` vanishing at
//! `t = 0`, so the `N_t = n_t` degrees of freedom sit at `t_i = i h_t`,
//! `i = 1..=n_t`. The stiffness matrix `A_t[j][i] = <d/dt phi_i, H_T phi_j>` is
//! dense but shares the eigenvectors `v_l = (sin((pi/2 + l pi) i / N_t))_i` with
//! the tridiagonal mass matrix; the eigenvalues are given by a rapidly
//! converging series.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dense::DenseMatrix;
use crate::math::{powi, sin, sin_cos};
use crate::tridiag::TridiagonalSym;
use crate::{Error, Result};

/// Default relative cutoff for the eigenvalue series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;

/// Uniform mesh of `(0, T)` with `n_t` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalMesh {
    n_t: usize,
    t_end: f64,
    h_t: f64,
}

impl TemporalMesh {
    pub fn new(n_t: usize, t_end: f64) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::InvalidMesh("at least one temporal element required"));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::InvalidMesh("time horizon must be positive and finite"));
        }
        Ok(Self {
            n_t,
            t_end,
            h_t: t_end / n_t as f64,
        })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of temporal degrees of freedom (equals `n_t`).
    pub fn dofs(&self) -> usize {
        self.n_t
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn h_t(&self) -> f64 {
        self.h_t
    }

    /// Time of node `i` (`i = 0..=n_t`).
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h_t
    }

    /// Mass matrix `M_t[j][i] = <phi_i, phi_j>`: rows `h_t/6 [1, 4, 1]`, last
    /// row `h_t/6 [1, 2]`.
    pub fn mass_matrix(&self) -> TridiagonalSym {
        let n = self.n_t;
        let h = self.h_t;
        let mut main = alloc::vec![2.0 * h / 3.0; n];
        main[n - 1] = h / 3.0;
        let off = alloc::vec![h / 6.0; n - 1];
        TridiagonalSym { main, off }
    }
}

/// `sin((pi/2 + l pi) i / n_t)`, the `i`-th component (`1..=n_t`) of eigenvector `l`.
pub fn eigenvector_component(l: usize, i: usize, n_t: usize) -> f64 {
    debug_assert!(l < n_t && (1..=n_t).contains(&i));
    sin((0.5 + l as f64) * PI * i as f64 / n_t as f64)
}

/// Folded series
/// `sum_mu (2l+1)^4 / (4 mu N + 2l + 1)^3 + (2l+1)^4 / (4 mu N + 4N - 1 - 2l)^3`,
/// stopped once a term drops below `tol` times the running sum.
pub fn eigen_series(l: usize, n_t: usize, tol: f64) -> f64 {
    let a = (2 * l + 1) as f64;
    let a4 = powi(a, 4);
    let n4 = 4.0 * n_t as f64;
    let b = (4 * n_t - 1 - 2 * l) as f64;
    let mut sum = 0.0;
    for mu in 0..SERIES_MAX_TERMS {
        let base = n4 * mu as f64;
        let term = a4 / powi(base + a, 3) + a4 / powi(base + b, 3);
        sum += term;
        if term < tol * sum {
            break;
        }
    }
    sum
}

/// Generalized eigenvalue `lambda_l` of `A_t v = lambda M_t v`.
pub fn eigenvalue(l: usize, mesh: &TemporalMesh, tol: f64) -> f64 {
    let n = mesh.n_t();
    assert!(l < n, "eigen index out of range");
    let x = (0.5 + l as f64) * PI / (2.0 * n as f64);
    let (s, _) = sin_cos(x);
    let sinc4 = powi(s / x, 4);
    let (_, c2) = sin_cos(2.0 * x);
    3.0 * PI / (2.0 * mesh.t_end()) * sinc4 / (2.0 + c2) * eigen_series(l, n, tol)
}

/// Eigenvalues of the temporal pencil in channel order `l = 0..N_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalEigenSystem {
    mesh: TemporalMesh,
    lambdas: Vec<f64>,
    truncation_tol: f64,
}

impl TemporalEigenSystem {
    pub fn new(mesh: &TemporalMesh) -> Self {
        Self::with_tolerance(mesh, DEFAULT_SERIES_TOL)
    }

    pub fn with_tolerance(mesh: &TemporalMesh, tol: f64) -> Self {
        let lambdas = crate::par::map_range(mesh.n_t(), |l| eigenvalue(l, mesh, tol));
        Self {
            mesh: *mesh,
            lambdas,
            truncation_tol: tol,
        }
    }

    pub fn mesh(&self) -> &TemporalMesh {
        &self.mesh
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol
    }

    /// Eigenvector `l` as a dense vector of length `N_t`.
    pub fn eigenvector(&self, l: usize) -> Vec<f64> {
        let n = self.mesh.n_t();
        (1..=n).map(|i| eigenvector_component(l, i, n)).collect()
    }
}

/// Dense `A_t` summed directly over raw Fourier modes.
///
/// Each hat function has sine coefficients
/// `A_k^i = (2/N) sinc^2(x_k) sin((pi/2 + k pi) i / N)` (half that for the last
/// hat) with `x_k = (pi/2 + k pi)/(2N)`, and
/// `A_t[j][i] = 1/2 sum_k (pi/2 + k pi) A_k^i A_k^j`.
/// Modes `k < k_max` are summed explicitly. The remaining tail is added per
/// residue class `k = r mod 2N`, on which the summand is a constant times
/// `(pi/2 + k pi)^{-3}`, using an Euler-Maclaurin expansion of the Hurwitz zeta
/// function. No folding of modes onto `k < N` is used, so this is an
/// independent check of the closed-form eigenvalues.
pub fn assemble_a_dense(mesh: &TemporalMesh, k_max: usize) -> DenseMatrix {
    assert!(k_max >= 1, "k_max must be positive");
    let n = mesh.n_t();
    let nf = n as f64;
    let mut a = DenseMatrix::zeros(n, n);
    let mut coef = alloc::vec![0.0; n];

    let fill_coef = |k: usize, coef: &mut [f64]| -> f64 {
        let omega = (0.5 + k as f64) * PI;
        let x = omega / (2.0 * nf);
        let sinc2 = powi(sin(x) / x, 2);
        for (idx, c) in coef.iter_mut().enumerate() {
            let i = idx + 1;
            let w = if i == n { 1.0 / nf } else { 2.0 / nf };
            *c = w * sinc2 * sin(omega * i as f64 / nf);
        }
        omega
    };

    for k in 0..k_max {
        let omega = fill_coef(k, &mut coef);
        let s = 0.5 * omega;
        for j in 0..n {
            let cj = s * coef[j];
            for i in 0..n {
                a[(j, i)] += cj * coef[i];
            }
        }
    }

    // Tail: for k = r + 2N mu the product A_k^i A_k^j (pi/2 + k pi) equals
    // P_r^{ij} (pi/2 + k_r pi)^3 / (pi/2 + k pi)^3 with k_r the first mode of the
    // class at or beyond k_max.
    let period = 2 * n;
    for r in 0..period {
        let k0 = if r >= k_max {
            r
        } else {
            r + period * (k_max - r).div_ceil(period)
        };
        let omega0 = fill_coef(k0, &mut coef);
        // sum_{mu >= 0} (omega0 / (omega0 + 2 N pi mu))^3 = q^3 zeta(3, q), q = omega0 / (2 N pi)
        let q = omega0 / (2.0 * nf * PI);
        let factor = powi(q, 3) * hurwitz_zeta3(q);
        let s = 0.5 * omega0 * factor;
        for j in 0..n {
            let cj = s * coef[j];
            for i in 0..n {
                a[(j, i)] += cj * coef[i];
            }
        }
    }
    a
}

/// `zeta(3, q) = sum_{m >= 0} (q + m)^{-3}` for `q > 0`.
fn hurwitz_zeta3(q: f64) -> f64 {
    const SHIFT: f64 = 40.0;
    let mut q = q;
    let mut head = 0.0;
    while q < SHIFT {
        head += 1.0 / powi(q, 3);
        q += 1.0;
    }
    let q2 = 1.0 / (q * q);
    // Euler-Maclaurin: integral + f/2 - B2/2! f' - B4/4! f''' - B6/6! f^(5)
    let tail = 0.5 * q2 + 0.5 * q2 / q + 0.25 * q2 * q2 - q2 * q2 * q2 / 12.0 + q2 * q2 * q2 * q2 / 12.0;
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_matrix_small_cases() {
        let m = TemporalMesh::new(1, 1.0).unwrap().mass_matrix();
        assert_eq!(m.main, [1.0 / 3.0]);
        assert!(m.off.is_empty());
        let m = TemporalMesh::new(2, 1.0).unwrap().mass_matrix();
        assert!((m.main[0] - 1.0 / 3.0).abs() < 1e-16);
        assert!((m.main[1] - 1.0 / 6.0).abs() < 1e-16);
        assert!((m.off[0] - 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn interior_mass_rows_sum_to_h() {
        let mesh = TemporalMesh::new(9, 2.0).unwrap();
        let m = mesh.mass_matrix();
        let rows = m.matvec(&[1.0; 9]);
        for r in &rows[1..8] {
            assert!((r - mesh.h_t()).abs() < 1e-14 * mesh.h_t());
        }
    }

    #[test]
    fn mesh_width_consistent() {
        for n in [1, 3, 7, 1000] {
            let mesh = TemporalMesh::new(n, 1.7).unwrap();
            assert!((mesh.h_t() * n as f64 - 1.7).abs() / 1.7 < 1e-14);
        }
        assert!(TemporalMesh::new(0, 1.0).is_err());
        assert!(TemporalMesh::new(2, 0.0).is_err());
    }

    #[test]
    fn eigenvector_components() {
        for n in [1, 2, 5] {
            assert!((eigenvector_component(0, n, n) - 1.0).abs() < 1e-15);
        }
        assert!((eigenvector_component(0, 1, 2) - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((eigenvector_component(1, 2, 2) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_scales_inversely_with_horizon() {
        let m1 = TemporalMesh::new(6, 1.0).unwrap();
        let m2 = TemporalMesh::new(6, 2.0).unwrap();
        for l in 0..6 {
            let a = eigenvalue(l, &m1, DEFAULT_SERIES_TOL);
            let b = eigenvalue(l, &m2, DEFAULT_SERIES_TOL);
            assert!((a / 2.0 - b).abs() < 1e-15 * a);
        }
    }

    #[test]
    fn series_monotone_in_cutoff() {
        let loose = eigen_series(0, 3, 1e-4);
        let tight = eigen_series(0, 3, 1e-12);
        assert!(tight > loose);
    }

    #[test]
    fn hurwitz_matches_direct_sum() {
        // zeta(3, 1) = zeta(3)
        let z3 = 1.202_056_903_159_594_3;
        assert!((hurwitz_zeta3(1.0) - z3).abs() < 1e-13);
        assert!((hurwitz_zeta3(0.5) - 8.0 * z3 * 7.0 / 8.0).abs() < 1e-12);
    }
}
