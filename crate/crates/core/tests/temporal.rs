mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::*;
use heatopt_core::temporal::{eigen_series, eigenvalue, DEFAULT_SERIES_TOL};
use heatopt_core::{TemporalEigenSystem, TemporalMesh};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn eigen_residual(n_t: usize, t_end: f64) -> f64 {
    let mesh = TemporalMesh::new(n_t, t_end).unwrap();
    let eig = TemporalEigenSystem::new(&mesh);
    let a = temporal_stiffness_dense(&mesh);
    let m = temporal_mass_dense(&mesh);
    let mut worst: f64 = 0.0;
    for (l, &lambda) in eig.lambdas().iter().enumerate() {
        let v = DVector::from_vec(eig.eigenvector(l));
        let mv = &m * &v;
        let r = &a * &v - &mv * lambda;
        worst = worst.max(r.amax() / (lambda * mv.amax()));
    }
    worst
}

#[test]
fn generalized_eigen_residual_small_meshes() {
    for n_t in [1, 2, 4, 8, 16] {
        let r = eigen_residual(n_t, 1.0);
        assert!(r < 1e-7, "n_t={n_t}: {r:e}");
    }
}

#[test]
fn lowest_eigenvalue_single_element() {
    let mesh = TemporalMesh::new(1, 1.0).unwrap();
    let lambda = eigenvalue(0, &mesh, DEFAULT_SERIES_TOL);
    let exact = 42.0 * ZETA3 / PI.powi(3);
    assert!(((lambda - exact) / exact).abs() < 1e-10);
}

#[test]
fn single_element_stiffness() {
    let mesh = TemporalMesh::new(1, 1.0).unwrap();
    let a = temporal_stiffness_dense(&mesh);
    assert_relative_eq!(a[(0, 0)], 14.0 * ZETA3 / PI.powi(3), max_relative = 1e-9);
}

#[test]
fn eigenvalues_match_dense_pencil() {
    // A v = lambda M v  <=>  (L^{-1} A L^{-T}) w = lambda w with M = L L^T
    let mesh = TemporalMesh::new(8, 1.0).unwrap();
    let a = temporal_stiffness_dense(&mesh);
    let m = temporal_mass_dense(&mesh);
    let l = m.cholesky().unwrap().l();
    let li = l.clone().try_inverse().unwrap();
    let s: DMatrix<f64> = &li * a * li.transpose();
    let s = (&s + s.transpose()) * 0.5;
    let mut dense: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
    dense.sort_by(f64::total_cmp);
    let mut fast = TemporalEigenSystem::new(&mesh).lambdas().to_vec();
    fast.sort_by(f64::total_cmp);
    for (a, b) in fast.iter().zip(&dense) {
        assert!(((a - b) / b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn dense_stiffness_symmetric_positive() {
    let mesh = TemporalMesh::new(8, 1.0).unwrap();
    let a = temporal_stiffness_dense(&mesh);
    assert!((&a - a.transpose()).amax() < 1e-12);
    let mut rng = rng(7);
    for _ in 0..10 {
        let v = DVector::from_vec(random_vec(&mut rng, 8));
        assert!(v.dot(&(&a * &v)) > 0.0);
    }
}

#[test]
fn eigenvalues_positive() {
    for n_t in [1, 3, 7, 32, 100] {
        let mesh = TemporalMesh::new(n_t, 1.0).unwrap();
        assert!(TemporalEigenSystem::new(&mesh).lambdas().iter().all(|&l| l > 0.0));
    }
}

#[test]
fn series_grows_as_cutoff_tightens() {
    for l in 0..4 {
        let coarse = eigen_series(l, 4, 1e-4);
        let fine = eigen_series(l, 4, 1e-10);
        let finest = eigen_series(l, 4, 1e-14);
        assert!(coarse <= fine && fine <= finest);
    }
}

proptest! {
    #[test]
    fn eigenvalue_scales_inversely_with_horizon(n_t in 1usize..40, l_frac in 0.0f64..1.0, t in 0.1f64..10.0) {
        let l = ((n_t as f64 * l_frac) as usize).min(n_t - 1);
        let one = eigenvalue(l, &TemporalMesh::new(n_t, 1.0).unwrap(), DEFAULT_SERIES_TOL);
        let scaled = eigenvalue(l, &TemporalMesh::new(n_t, t).unwrap(), DEFAULT_SERIES_TOL);
        prop_assert!((scaled * t - one).abs() <= 1e-13 * one);
    }

    #[test]
    fn mesh_width_times_count_is_horizon(n_t in 1usize..10_000, t in 1e-3f64..1e3) {
        let mesh = TemporalMesh::new(n_t, t).unwrap();
        prop_assert!((mesh.h_t() * n_t as f64 - t).abs() < 1e-14 * t);
    }

    #[test]
    fn mass_solve_residual(seed in any::<u64>(), n_t in 1usize..64) {
        let mesh = TemporalMesh::new(n_t, 1.0).unwrap();
        let m = mesh.mass_matrix();
        let rhs = random_vec(&mut rng(seed), n_t);
        let x = m.solve(&rhs).unwrap();
        let r = m.matvec(&x);
        let scale = rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (a, b) in r.iter().zip(&rhs) {
            prop_assert!((a - b).abs() < 1e-12 * scale);
        }
    }
}
