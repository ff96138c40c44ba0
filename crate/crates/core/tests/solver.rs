mod common;

use common::*;
use heatopt_core::{Error, SolverConfig, SpaceTimeField, SpaceTimeOperator, SpatialGrid, TemporalMesh};
use proptest::prelude::*;

fn setup(dim: usize, n_x: usize, n_t: usize) -> SpaceTimeOperator {
    SpaceTimeOperator::new(
        SpatialGrid::new(dim, n_x).unwrap(),
        TemporalMesh::new(n_t, 1.0).unwrap(),
    )
}

fn random_field(op: &SpaceTimeOperator, seed: u64) -> SpaceTimeField {
    let v = random_vec(&mut rng(seed), op.dofs());
    SpaceTimeField::from_vec(*op.grid(), *op.mesh(), v).unwrap()
}

#[test]
fn apply_matches_dense_kronecker() {
    let op = setup(1, 4, 4);
    let h2 = op.grid().h_x().powi(2);
    for rho in [0.0, h2, 1.0] {
        let k = kh_dense(1, 4, op.mesh(), rho);
        let u = random_field(&op, 2);
        let ku = op.apply_kh(rho, &u).unwrap();
        assert!(rel_diff(ku.coeffs(), &matvec(&k, u.coeffs())) < 1e-9);
    }
}

#[test]
fn direct_matches_dense_lu() {
    for (dim, n_x, n_t) in [(1, 4, 4), (1, 9, 7), (2, 5, 3), (3, 4, 5)] {
        let op = setup(dim, n_x, n_t);
        let h2 = op.grid().h_x().powi(2);
        let f = random_field(&op, 9);
        for rho in [0.0, h2, 1.0] {
            let k = kh_dense(dim, n_x, op.mesh(), rho);
            let r = op.solve_direct(&SolverConfig::new(rho), &f).unwrap();
            let err = rel_diff(r.solution.coeffs(), &dense_solve(&k, f.coeffs()));
            assert!(err < 1e-8, "d={dim} n_x={n_x} n_t={n_t} rho={rho}: {err:e}");
            assert!(r.residual_norm < 1e-9);
        }
    }
}

#[test]
fn zero_rho_reduces_to_mass_solve() {
    let op = setup(2, 6, 5);
    let f = random_field(&op, 4);
    let r = op.solve_direct(&SolverConfig::new(0.0), &f).unwrap();
    // (M_t (x) M_x)^{-1} by tridiagonal sweeps in time and space
    let m_x = op.spatial().dofs();
    let n_t = op.mesh().dofs();
    let mut data = f.coeffs().to_vec();
    for i in 0..n_t {
        op.spatial()
            .mass_solve_in_place(&mut data[i * m_x..(i + 1) * m_x])
            .unwrap();
    }
    let mt = op.mesh().mass_matrix();
    for k in 0..m_x {
        let fiber: Vec<f64> = (0..n_t).map(|i| data[i * m_x + k]).collect();
        for (i, v) in mt.solve(&fiber).unwrap().into_iter().enumerate() {
            data[i * m_x + k] = v;
        }
    }
    assert!(rel_diff(r.solution.coeffs(), &data) < 1e-10);
}

#[test]
fn global_cg_agrees_with_direct() {
    let op = setup(2, 8, 8);
    let cfg = SolverConfig::for_grid(op.grid());
    let f = random_field(&op, 21);
    let direct = op.solve_direct(&cfg, &f).unwrap();
    let cg = op.solve_global_cg(&cfg, &f).unwrap();
    assert!(rel_diff(cg.solution.coeffs(), direct.solution.coeffs()) < 1e-7);
}

#[test]
fn global_cg_iterations_bounded_under_refinement() {
    // n_x = 8 is still pre-asymptotic (+30% to 16), so start one level later
    let mut iters = Vec::new();
    for n_x in [16, 32, 64] {
        let op = setup(2, n_x, n_x);
        let cfg = SolverConfig::for_grid(op.grid());
        let f = random_field(&op, 3);
        iters.push(op.solve_global_cg(&cfg, &f).unwrap().cg_iter_mean);
    }
    for w in iters.windows(2) {
        assert!(w[1] < 1.25 * w[0], "{iters:?}");
    }
}

#[test]
fn spectral_equivalence_bounds() {
    let mut upper = Vec::new();
    for n_x in [8, 16] {
        let op = setup(2, n_x, n_x);
        let rho = op.grid().h_x().powi(2);
        let mut c: f64 = 0.0;
        for seed in 0..10 {
            let u = random_field(&op, seed);
            let q = op.energy(rho, &u).unwrap() / op.apply_mass(&u).unwrap().dot(&u);
            assert!(q >= 1.0);
            c = c.max(q);
        }
        upper.push(c);
    }
    assert!(upper[1] < 2.0 * upper[0] && upper[0] < 2.0 * upper[1], "{upper:?}");
}

#[test]
fn cg_cap_names_time_index() {
    let op = setup(3, 8, 3);
    let f = random_field(&op, 1);
    let mut cfg = SolverConfig::new(1.0);
    cfg.cg_max_iter = Some(2);
    assert!(matches!(
        op.solve_direct(&cfg, &f),
        Err(Error::CgNotConverged { channel: Some(0), .. })
    ));
}

#[test]
fn iteration_statistics_recorded() {
    let op = setup(2, 8, 6);
    let mut cfg = SolverConfig::for_grid(op.grid());
    cfg.record_iterations = true;
    let r = op.solve_direct(&cfg, &random_field(&op, 8)).unwrap();
    let its = r.cg_iterations.unwrap();
    assert_eq!(its.len(), 6);
    let mean = its.iter().sum::<usize>() as f64 / 6.0;
    assert!((mean - r.cg_iter_mean).abs() < 1e-12);
    assert!(r.cg_iter_var >= 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kh_symmetric_and_positive(seed in any::<u64>(), dim in 1usize..=3, n_x in 2usize..6, n_t in 1usize..7, rho in 0.0f64..2.0) {
        let op = setup(dim, n_x, n_t);
        let u = random_field(&op, seed);
        let v = random_field(&op, seed.wrapping_add(1));
        let uv = op.apply_kh(rho, &v).unwrap().dot(&u);
        let vu = op.apply_kh(rho, &u).unwrap().dot(&v);
        prop_assert!((uv - vu).abs() <= 1e-10 * (uv.abs() + vu.abs()).max(1e-300));
        prop_assert!(op.energy(rho, &u).unwrap() > 0.0);
    }

    #[test]
    fn direct_solve_inverts_apply(seed in any::<u64>(), dim in 1usize..=3, n_x in 2usize..7, n_t in 1usize..9) {
        let op = setup(dim, n_x, n_t);
        let u = random_field(&op, seed);
        let rho = op.grid().h_x().powi(2);
        let f = op.apply_kh(rho, &u).unwrap();
        let r = op.solve_direct(&SolverConfig::new(rho), &f).unwrap();
        prop_assert!(rel_diff(r.solution.coeffs(), u.coeffs()) < 1e-8);
    }
}
