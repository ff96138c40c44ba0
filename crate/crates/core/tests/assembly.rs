mod common;

use common::*;
use heatopt_core::assembly::{assemble_load, Irregularity};
use heatopt_core::{
    assemble_rhs, l2q_error, target_l2q_norm_sq, QuadratureRule, SpaceTimeField, SpatialGrid, TargetKind, TargetSpec,
    TemporalMesh,
};

fn quad(points: usize) -> QuadratureRule {
    QuadratureRule {
        points_per_axis_space: points,
        points_per_axis_time: points,
        ..QuadratureRule::default()
    }
}

#[test]
fn smooth_load_is_integrated_exactly() {
    let grid = SpatialGrid::new(3, 4).unwrap();
    let mesh = TemporalMesh::new(4, 1.0).unwrap();
    let target = TargetSpec::new(TargetKind::Smooth, 1.0);
    let three = assemble_rhs(&grid, &mesh, &target, &quad(3)).unwrap();
    let five = assemble_rhs(&grid, &mesh, &target, &quad(5)).unwrap();
    assert!(rel_diff(three.coeffs(), five.coeffs()) < 1e-10);
}

#[test]
fn load_is_linear_in_the_integrand() {
    let grid = SpatialGrid::new(3, 4).unwrap();
    let mesh = TemporalMesh::new(3, 1.0).unwrap();
    let s = TargetSpec::new(TargetKind::Smooth, 1.0);
    let d = TargetSpec::new(TargetKind::Discontinuous, 1.0);
    let irr = Irregularity::of(&d);
    let q = QuadratureRule::default();
    let (a, b) = (1.7, -0.6);
    let mixed = assemble_load(&grid, &mesh, &q, irr, |x, t| {
        a * s.evaluate(x, t) + b * d.evaluate(x, t)
    });
    let fs = assemble_load(&grid, &mesh, &q, irr, |x, t| s.evaluate(x, t));
    let fd = assemble_rhs(&grid, &mesh, &d, &q).unwrap();
    let combo: Vec<f64> = fs
        .coeffs()
        .iter()
        .zip(fd.coeffs())
        .map(|(x, y)| a * x + b * y)
        .collect();
    assert!(rel_diff(mixed.coeffs(), &combo) < 1e-12);
}

#[test]
fn smooth_norm_matches_high_order_oracle() {
    // ||t^2 prod x(1-x)||^2 = 1/5 * (1/30)^3 on the unit cylinder
    let grid = SpatialGrid::new(3, 4).unwrap();
    let mesh = TemporalMesh::new(4, 1.0).unwrap();
    let target = TargetSpec::new(TargetKind::Smooth, 1.0);
    let exact = (0.2 * (1.0f64 / 30.0).powi(3)).sqrt();
    let zero = SpaceTimeField::zeros(grid, mesh);
    let high = l2q_error(&zero, &target, &quad(8)).unwrap();
    let default = l2q_error(&zero, &target, &QuadratureRule::default()).unwrap();
    assert!((high - exact).abs() < 1e-10 * exact);
    assert!((default - high).abs() < 1e-10 * high);
    let sq = target_l2q_norm_sq(&grid, &mesh, &target, &QuadratureRule::default()).unwrap();
    assert!((sq.sqrt() - exact).abs() < 1e-10 * exact);
}

#[test]
fn discontinuous_error_stable_under_subdivision() {
    let target = TargetSpec::new(TargetKind::Discontinuous, 1.0);
    for n_x in [6, 8] {
        let grid = SpatialGrid::new(3, n_x).unwrap();
        let mesh = TemporalMesh::new(n_x, 1.0).unwrap();
        let u = SpaceTimeField::interpolate(grid, mesh, |x, t| t * x.iter().map(|v| v * (1.0 - v)).product::<f64>());
        let base = l2q_error(&u, &target, &QuadratureRule::default()).unwrap();
        let fine = QuadratureRule {
            subdivisions: 16,
            ..QuadratureRule::default()
        };
        let refined = l2q_error(&u, &target, &fine).unwrap();
        assert!((base - refined).abs() < 1e-3 * base, "n_x={n_x}");
    }
}

#[test]
fn discontinuous_norm_is_cube_volume() {
    let target = TargetSpec::new(TargetKind::Discontinuous, 1.0);
    for n_x in [3, 4, 7] {
        let grid = SpatialGrid::new(3, n_x).unwrap();
        let mesh = TemporalMesh::new(2, 1.0).unwrap();
        let sq = target_l2q_norm_sq(&grid, &mesh, &target, &QuadratureRule::default()).unwrap();
        assert!((sq - 0.125).abs() < 1e-13, "n_x={n_x}: {sq}");
    }
}

#[test]
fn interpolant_of_multilinear_function_has_no_error() {
    // piecewise multilinear on n_x = 4, zero on the boundary and at t = 0
    let g = |x: &[f64], t: f64| t * (1.0 - (2.0 * x[0] - 1.0).abs()) * (1.0 - (2.0 * x[1] - 1.0).abs());
    let grid = SpatialGrid::new(2, 4).unwrap();
    let mesh = TemporalMesh::new(3, 2.0).unwrap();
    let u = SpaceTimeField::interpolate(grid, mesh, g);
    let err = heatopt_core::assembly::l2q_error_fn(&u, &QuadratureRule::default(), g);
    assert!(err < 1e-14, "{err:e}");
}

#[test]
fn dimension_mismatch_rejected() {
    let grid = SpatialGrid::new(2, 4).unwrap();
    let mesh = TemporalMesh::new(2, 1.0).unwrap();
    let target = TargetSpec::new(TargetKind::Smooth, 1.0);
    assert!(assemble_rhs(&grid, &mesh, &target, &QuadratureRule::default()).is_err());
    let wave = TargetSpec::new(TargetKind::TurningWave, 1.0);
    assert!(assemble_rhs(&grid, &mesh, &wave, &QuadratureRule::default()).is_ok());
}
