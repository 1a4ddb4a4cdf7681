mod common;

use nehari_ft::closedform::{branch_tilde, branches, build_stationary, dipole_state};
use nehari_ft::functionals::{
    closed_form_report, coercivity_constant, evaluate, nehari_scale, project_to_nehari,
};
use nehari_ft::grid::h1tau_norm;
use nehari_ft::quadrature::full_power_integral;
use nehari_ft::{DefectParams, HalfLineGrid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta;

fn anchor() -> DefectParams {
    DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn full_power_integrals_match_the_beta_function() {
    // ∫_{−1}^{1} (1 − t²)^p dt = B(1/2, p + 1)
    for p in [-0.9, -2.0 / 3.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.5] {
        let ours = full_power_integral(p);
        let oracle = beta(0.5, p + 1.0);
        assert!((ours - oracle).abs() < 1e-12 * oracle, "p {p}: {ours} {oracle}");
    }
}

#[test]
fn closed_form_matches_quadrature_on_a_sample_grid() {
    for tau in [0.5, 2.0, 5.0, 0.8, 1.3] {
        for mu in [0.5, 1.0, 1.7, 2.0, 3.0] {
            let base = DefectParams::new(tau, 1.0, mu, 1.0).unwrap();
            for factor in [1.2, 2.0, 5.0, 20.0, 80.0] {
                let p = base.with_omega(factor * base.omega_star()).unwrap();
                for b in branches(&p) {
                    let q = evaluate(&build_stationary(&b, b.default_grid()).unwrap(), &p);
                    let c = closed_form_report(&b);
                    for (x, y) in [(q.kinetic, c.kinetic), (q.mass2, c.mass2), (q.lp, c.lp), (q.defect, c.defect)] {
                        assert!((x - y).abs() <= 1e-6 * y.abs(), "{p:?}: {x} vs {y}");
                    }
                }
            }
        }
    }
}

#[test]
fn quadratic_form_is_coercive_on_random_fields() {
    let p = anchor();
    let c = coercivity_constant(&p).unwrap();
    let grid = HalfLineGrid::new(30.0, 3000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let u = common::random_field(&mut rng, grid, p.tau());
        let r = evaluate(&u, &p);
        let norm = h1tau_norm(&u);
        assert!(r.quadratic(&p) >= c * norm * norm, "{} < {}", r.quadratic(&p), c * norm * norm);
    }
}

#[test]
fn sobolev_ratio_is_bounded_by_one() {
    let p = anchor();
    let grid = HalfLineGrid::new(30.0, 3000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let u = common::random_field(&mut rng, grid, p.tau());
        let ratio = evaluate(&u, &p).lp.powf(0.25) / h1tau_norm(&u);
        worst = worst.max(ratio);
    }
    assert!(worst <= 1.0, "empirical max {worst}");
}

#[test]
fn dipole_state_lies_inside_the_manifold() {
    let p = anchor();
    let grid = HalfLineGrid::new(40.0, 8000).unwrap();
    let eta = dipole_state(&p, grid);
    let r = evaluate(&eta, &p);
    // zero for the v = 0 functional, negative once the defect acts
    let nehari_free = r.nehari + p.v() * r.defect;
    assert!(nehari_free.abs() < 1e-8, "{nehari_free}");
    assert!(r.nehari < 0.0);
    assert!(nehari_scale(&eta, &p).unwrap() < 1.0);
}

#[test]
fn ground_state_action_sits_below_the_dipole_bound() {
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    for (tau, v, mu) in [(2.0, 1.0, 1.0), (0.5, 1.0, 1.0), (3.0, 0.5, 2.0), (2.0, 2.0, 0.5)] {
        let base = DefectParams::new(tau, v, mu, 1.0).unwrap();
        for factor in [2.0, 10.0, 50.0] {
            let p = base.with_omega(factor * base.omega_star()).unwrap();
            let d = closed_form_report(&branch_tilde(&p).unwrap()).reduced;
            let projected = project_to_nehari(&dipole_state(&p, grid), &p).unwrap();
            let bound = evaluate(&projected, &p).reduced;
            assert!(d > 0.0 && d < bound, "{p:?}: d {d} bound {bound}");
        }
    }
}

#[test]
fn vanishing_strength_tends_to_the_dipole_state() {
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let eta = evaluate(&dipole_state(&anchor(), grid), &anchor());
    let mut last = f64::INFINITY;
    for v in [1e-1, 1e-2, 1e-3, 1e-5] {
        let p = DefectParams::new(2.0, v, 1.0, 1.0).unwrap();
        let r = closed_form_report(&branch_tilde(&p).unwrap());
        let gap = (r.mass2 - eta.mass2).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lp_is_homogeneous(c in 0.1f64..5.0, mu in 0.3f64..3.0) {
        let p = DefectParams::new(2.0, 1.0, mu, 1.0).unwrap();
        let grid = HalfLineGrid::new(40.0, 2000).unwrap();
        let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
        let a = evaluate(&u, &p).lp;
        let b = evaluate(&u.scaled(c), &p).lp;
        prop_assert!((b - c.powf(2.0 * mu + 2.0) * a).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn projection_lands_on_the_manifold(seed in 0u64..1000) {
        let p = anchor();
        let grid = HalfLineGrid::new(30.0, 1500).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_field(&mut rng, grid, p.tau());
        let w = project_to_nehari(&u, &p).unwrap();
        let r = evaluate(&w, &p);
        prop_assert!(r.on_manifold(), "{}", r.nehari);
        prop_assert!((r.action - r.reduced).abs() <= 1e-8 * r.lp.max(1.0));
        let again = project_to_nehari(&w, &p).unwrap();
        let diff = again.minus().iter().zip(w.minus()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
    }
}
