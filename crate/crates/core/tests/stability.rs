use nehari_ft::closedform::{branch_tilde, build_stationary, dipole_state};
use nehari_ft::functionals::evaluate;
use nehari_ft::stability::{
    bifurcation_sweep, dmass_analytic, dphi, gss_verdict, mass, mass_curve, omega_grid, phi, Verdict,
};
use nehari_ft::{DefectParams, HalfLineGrid};

#[test]
fn phi_decreases_everywhere_sampled() {
    for tau in [0.5, 2.0, 5.0] {
        for mu in [0.5, 1.0, 2.0, 3.0] {
            let base = DefectParams::new(tau, 1.0, mu, 1.0).unwrap();
            for w in omega_grid(1.1 * base.omega_star(), 100.0 * base.omega_star(), 40, true).unwrap() {
                assert!(dphi(&base.with_omega(w).unwrap()).unwrap() < 0.0, "tau {tau} mu {mu} omega {w}");
            }
        }
    }
}

#[test]
fn mass_increases_up_to_mu_two() {
    for tau in [0.5, 2.0, 5.0] {
        for mu in [0.3, 0.5, 1.0, 1.5, 2.0] {
            let base = DefectParams::new(tau, 1.0, mu, 1.0).unwrap();
            for w in omega_grid(1.01 * base.omega_star(), 500.0 * base.omega_star(), 60, true).unwrap() {
                let p = base.with_omega(w).unwrap();
                assert!(dmass_analytic(&p).unwrap() > 0.0, "tau {tau} mu {mu} omega {w}");
            }
        }
    }
}

#[test]
fn phi_is_the_width_of_the_branch_at_mu_one() {
    let p = DefectParams::new(2.0, 1.0, 1.0, 0.7).unwrap();
    let b = branch_tilde(&p).unwrap();
    assert!((phi(&p).unwrap() - (b.t_plus() - b.t_minus())).abs() < 1e-14);
}

#[test]
fn closed_form_mass_matches_quadrature() {
    for (tau, mu) in [(2.0, 1.0), (0.5, 3.0), (5.0, 0.5), (2.0, 2.0)] {
        let base = DefectParams::new(tau, 1.0, mu, 1.0).unwrap();
        for factor in [1.5, 10.0, 60.0] {
            let p = base.with_omega(factor * base.omega_star()).unwrap();
            let b = branch_tilde(&p).unwrap();
            let q = evaluate(&build_stationary(&b, b.default_grid()).unwrap(), &p).mass2;
            let m = mass(&p).unwrap();
            assert!((q - m).abs() < 1e-6 * m, "{p:?}: {q} {m}");
        }
    }
}

#[test]
fn ground_state_is_lighter_than_a_soliton() {
    let base = DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
    for w in omega_grid(0.041, 50.0, 50, true).unwrap() {
        assert!(mass(&base.with_omega(w).unwrap()).unwrap() < 4.0 * w.sqrt());
    }
}

#[test]
fn mass_tends_to_the_dipole_mass_as_strength_vanishes() {
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let p0 = DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
    let dipole = evaluate(&dipole_state(&p0, grid), &p0).mass2;
    let masses: Vec<f64> = [0.8, 0.4, 0.1, 0.01, 1e-4]
        .iter()
        .map(|&v| mass(&DefectParams::new(2.0, v, 1.0, 1.0).unwrap()).unwrap())
        .collect();
    // approached from below
    assert!(masses.windows(2).all(|w| w[1] > w[0]));
    assert!(masses[4] < dipole);
    assert!((masses[4] - dipole).abs() < 1e-3 * dipole);
}

#[test]
fn verdicts_match_the_theory() {
    let p = DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
    let v = gss_verdict(&p, true).unwrap();
    assert!(v.spectral_ok);
    assert_eq!(v.verdict, Verdict::Stable);
    for w in [0.2, 1.0, 5.0, 40.0] {
        let p = DefectParams::new(2.0, 1.0, 2.0, w).unwrap();
        assert_eq!(gss_verdict(&p, false).unwrap().verdict, Verdict::Stable);
    }
    let small = DefectParams::new(2.0, 1.0, 3.0, 0.1).unwrap();
    let large = DefectParams::new(2.0, 1.0, 3.0, 2.0).unwrap();
    assert_eq!(gss_verdict(&small, false).unwrap().verdict, Verdict::Stable);
    assert_eq!(gss_verdict(&large, false).unwrap().verdict, Verdict::Unstable);
}

#[test]
fn sweep_counts_step_at_the_thresholds() {
    let p = DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
    let grid = omega_grid(0.01, 2.0, 200, false).unwrap();
    let rows = bifurcation_sweep(&p, &grid);
    let first_one = rows.iter().position(|r| r.count == 1).unwrap();
    assert!(grid[first_one] > 0.04 && grid[first_one - 1] <= 0.04);
    let first_two = rows.iter().position(|r| r.count == 2).unwrap();
    assert!(grid[first_two] > 1.0 / 9.0 && grid[first_two - 1] <= 1.0 / 9.0);
    assert!(rows[first_two].hat.is_some() && rows[first_two - 1].hat.is_none());
}

#[test]
fn mass_curve_is_not_monotone_for_mu_three() {
    let p = DefectParams::new(2.0, 1.0, 3.0, 1.0).unwrap();
    let grid = omega_grid(0.05, 20.0, 400, false).unwrap();
    let curve: Vec<_> = mass_curve(&p, &grid).into_iter().map(|r| r.unwrap()).collect();
    let rising = curve.windows(2).any(|w| w[1].mass > w[0].mass);
    let falling = curve.windows(2).any(|w| w[1].mass < w[0].mass);
    assert!(rising && falling);
    assert!(curve.iter().any(|c| c.verdict == Verdict::Stable));
    assert!(curve.iter().any(|c| c.verdict == Verdict::Unstable));
}
