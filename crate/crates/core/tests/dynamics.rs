use num_complex::Complex64;
use nehari_ft::closedform::{branch_tilde, build_stationary};
use nehari_ft::discrete::DiscreteModel;
use nehari_ft::dynamics::{evolve, evolve_streaming, perturb, EvolutionConfig, Evolver};
use nehari_ft::grid::vertex_residual;
use nehari_ft::{DefectParams, HalfLineGrid};

fn anchor() -> DefectParams {
    DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn ground_state_orbit_is_a_phase_rotation() {
    let p = anchor();
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
    let cfg = EvolutionConfig::new(1e-3, 10.0, 1000).unwrap();
    let r = evolve(&u, &p, &cfg, Some(&u)).unwrap();
    let model = DiscreteModel::new(grid, &p);
    let z = model.pack(&u);
    let norm = DiscreteModel::form(&model.gram(), &z).sqrt();
    assert!(r.max_orbital_distance() <= 5e-3 * norm, "{}", r.max_orbital_distance());
    assert!(r.max_mass_drift() <= 1e-10);
}

#[test]
fn pointwise_phase_error_is_second_order_in_time() {
    let p = anchor();
    let grid = HalfLineGrid::new(40.0, 4000).unwrap();
    let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
    let error = |dt: f64| -> f64 {
        let mut ev = Evolver::new(&u, &p, dt).unwrap();
        let steps = (1.0 / dt).round() as usize;
        for _ in 0..steps {
            ev.step().unwrap();
        }
        let rot = Complex64::from_polar(1.0, p.omega() * ev.time());
        let exact = ev.model().pack(&u);
        ev.state()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b * rot).norm())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (error(0.08), error(0.04));
    let h = grid.spacing();
    assert!(fine < 0.1 * (0.04f64.powi(2) + h * h), "{fine}");
    assert!(coarse / fine > 3.0, "{coarse} {fine}");
}

#[test]
fn mass_is_conserved_and_the_jump_persists() {
    let grid = HalfLineGrid::new(40.0, 2000).unwrap();
    for (tau, mu, omega) in [(2.0, 1.0, 1.0), (0.5, 2.0, 0.7), (3.0, 0.5, 2.0)] {
        let p = DefectParams::new(tau, 1.0, mu, omega).unwrap();
        let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
        let u0 = perturb(&u, &p, 0.05, 9);
        let jump0 = vertex_residual(&u0, &p).unwrap().0;
        let mut ev = Evolver::new(&u0, &p, 0.01).unwrap();
        let m0 = ev.mass();
        for _ in 0..300 {
            ev.step().unwrap();
        }
        let per_unit_time = (ev.mass() - m0).abs() / m0 / ev.time();
        assert!(per_unit_time <= 1e-10, "{per_unit_time}");
        let jump = vertex_residual(&ev.field(), &p).unwrap().0;
        assert!(jump <= 10.0 * jump0.max(f64::EPSILON), "{jump} {jump0}");
    }
}

#[test]
fn streaming_sees_every_snapshot() {
    let p = anchor();
    let grid = HalfLineGrid::new(20.0, 400).unwrap();
    let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
    let cfg = EvolutionConfig::new(0.01, 1.0, 10).unwrap();
    let mut seen = Vec::new();
    let r = evolve_streaming(&u, &p, &cfg, Some(&u), |s| {
        seen.push(s.t);
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, r.times);
    assert_eq!(r.times.len(), 11);
    assert_eq!(r.orbital_distance[0], 0.0);
}

#[test]
fn runs_are_reproducible() {
    let p = anchor();
    let grid = HalfLineGrid::new(20.0, 400).unwrap();
    let u = build_stationary(&branch_tilde(&p).unwrap(), grid).unwrap();
    let cfg = EvolutionConfig::new(0.01, 2.0, 20).unwrap();
    let a = evolve(&perturb(&u, &p, 0.01, 4), &p, &cfg, Some(&u)).unwrap();
    let b = evolve(&perturb(&u, &p, 0.01, 4), &p, &cfg, Some(&u)).unwrap();
    assert_eq!(a.orbital_distance, b.orbital_distance);
    assert_eq!(a.energy_drift, b.energy_drift);
}
