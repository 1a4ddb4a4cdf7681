mod common;

use nehari_ft::closedform::{branch_hat, branch_tilde, build_stationary};
use nehari_ft::discrete::DiscreteModel;
use nehari_ft::functionals::closed_form_report;
use nehari_ft::groundstate::{
    aligned_distance, identify, identify_with_variational, variational_minimize, VariationalOptions, Winner,
};
use nehari_ft::{DefectParams, HalfLineGrid, PiecewiseField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn anchor() -> DefectParams {
    DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn tilde_wins_wherever_both_branches_exist() {
    for tau in [0.3, 0.6, 1.4, 2.0, 5.0] {
        for mu in [0.5, 1.0, 2.0, 3.0] {
            let base = DefectParams::new(tau, 1.0, mu, 1.0).unwrap();
            for factor in [1.01, 2.0, 10.0, 100.0] {
                let p = base.with_omega(factor * base.omega_dstar()).unwrap();
                let r = identify(&p).unwrap();
                assert_eq!(r.winner, Winner::Tilde, "{p:?}");
                assert_eq!(r.d_omega, r.tilde.reduced);
                assert!(r.d_omega > 0.0);
            }
        }
    }
}

#[test]
fn random_positive_start_reaches_the_ground_state() {
    let p = anchor();
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let model = DiscreteModel::new(grid, &p);
    let exact = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
    let d = closed_form_report(&branch_tilde(&p).unwrap()).reduced;
    let norm = aligned_distance(&model, &exact, &PiecewiseField::zeros(grid));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let width = rng.gen_range(0.7..2.0);
        let centre = rng.gen_range(-0.8..0.0);
        let g = move |x: f64| (-((x - centre) / width).powi(2)).exp();
        let start = PiecewiseField::from_fn(grid, g, |x| 2.0 * g(0.0) * (-x).exp());
        let out = variational_minimize(&p, grid, Some(&start), &VariationalOptions::default()).unwrap();
        assert!(out.converged);
        assert!((out.value - d).abs() < 1e-3 * d);
        let dist = aligned_distance(&model, &out.field, &exact);
        assert!(dist < 1e-2 * norm, "{dist} vs {norm}");
    }
}

#[test]
fn hat_state_is_not_the_minimizer() {
    let p = anchor();
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let hat = branch_hat(&p).unwrap();
    let s_hat = closed_form_report(&hat).reduced;
    // pull the left bump slightly toward the defect; the value at 0 is kept
    let start = build_stationary(&hat, grid)
        .unwrap()
        .map_values(|x, u| if x < 0.0 { u * (1.0 + 0.01 * x) } else { u });
    let out = variational_minimize(&p, grid, Some(&start), &VariationalOptions::default()).unwrap();
    assert!(out.value < s_hat);
    let d = closed_form_report(&branch_tilde(&p).unwrap()).reduced;
    assert!((out.value - d).abs() < 1e-3 * d, "{} vs {d}", out.value);
}

#[test]
fn variational_value_agrees_with_identification() {
    let p = anchor();
    let r = identify_with_variational(&p, HalfLineGrid::new(40.0, 4000).unwrap(), &VariationalOptions::default())
        .unwrap();
    let v = r.variational.as_ref().unwrap();
    assert!((v.value - r.d_omega).abs() <= 1e-4 * r.d_omega);
    assert!(v.nehari.abs() <= 1e-8 * v.lp);
}

#[test]
fn below_threshold_is_refused() {
    let p = anchor().with_omega(0.03).unwrap();
    let grid = HalfLineGrid::new(40.0, 400).unwrap();
    assert!(variational_minimize(&p, grid, None, &VariationalOptions::default()).is_err());
}
