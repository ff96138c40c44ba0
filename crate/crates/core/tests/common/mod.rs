//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use heatopt_core::temporal::assemble_a_dense;
use heatopt_core::TemporalMesh;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ZETA3: f64 = 1.202_056_903_159_594_3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// `C[i-1][l] = sin((pi/2 + l pi) i / N)`.
pub fn sine_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |r, l| ((0.5 + l as f64) * PI * (r + 1) as f64 / n as f64).sin())
}

pub fn naive_dst(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (1..=n)
        .map(|i| {
            v.iter()
                .enumerate()
                .map(|(k, vk)| ((0.5 + k as f64) * PI * i as f64 / n as f64).sin() * vk)
                .sum()
        })
        .collect()
}

/// `h/6 [1, 4, 1]` with the last diagonal entry halved when `free_end`.
pub fn mass_1d(n: usize, h: f64, free_end: bool) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = 4.0 * h / 6.0;
        if i + 1 < n {
            m[(i, i + 1)] = h / 6.0;
            m[(i + 1, i)] = h / 6.0;
        }
    }
    if free_end {
        m[(n - 1, n - 1)] = 2.0 * h / 6.0;
    }
    m
}

pub fn stiffness_1d(n: usize, h: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = 2.0 / h;
        if i + 1 < n {
            a[(i, i + 1)] = -1.0 / h;
            a[(i + 1, i)] = -1.0 / h;
        }
    }
    a
}

/// Spatial `(M_x, A_x)` on the unit cube, first coordinate fastest.
pub fn spatial_dense(dim: usize, n_x: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = n_x - 1;
    let h = 1.0 / n_x as f64;
    let m1 = mass_1d(m, h, false);
    let a1 = stiffness_1d(m, h);
    let mut mass = m1.clone();
    let mut stiff = a1.clone();
    for _ in 1..dim {
        let s = a1.kronecker(&mass) + m1.kronecker(&stiff);
        mass = m1.kronecker(&mass);
        stiff = s;
    }
    (mass, stiff)
}

pub fn temporal_mass_dense(mesh: &TemporalMesh) -> DMatrix<f64> {
    mass_1d(mesh.n_t(), mesh.h_t(), true)
}

/// Raw Fourier-mode oracle for `A_t`, summing modes up to `800 N_t`.
pub fn temporal_stiffness_dense(mesh: &TemporalMesh) -> DMatrix<f64> {
    let a = assemble_a_dense(mesh, 800 * mesh.n_t());
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

/// `K_h = M_t (x) M_x + rho (A_t (x) M_x + M_t (x) A_x)`, time slow.
pub fn kh_dense(dim: usize, n_x: usize, mesh: &TemporalMesh, rho: f64) -> DMatrix<f64> {
    let (mx, ax) = spatial_dense(dim, n_x);
    let mt = temporal_mass_dense(mesh);
    let at = temporal_stiffness_dense(mesh);
    mt.kronecker(&mx) + (at.kronecker(&mx) + mt.kronecker(&ax)) * rho
}

pub fn dense_solve(k: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
    let lu = k.clone().lu();
    lu.solve(&DVector::from_column_slice(f))
        .expect("singular")
        .as_slice()
        .to_vec()
}

pub fn matvec(k: &DMatrix<f64>, u: &[f64]) -> Vec<f64> {
    (k * DVector::from_column_slice(u)).as_slice().to_vec()
}
