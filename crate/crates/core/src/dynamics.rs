//! Time evolution of `i∂ₜu = H_{τ,v}u − |u|^{2μ}u`.
//!
//! Relaxation Crank–Nicolson on the finite-element space of [`DiscreteModel`]:
//!
//! ```text
//! φ^{n+1/2} = 2|z^n|^{2μ} − φ^{n−1/2}
//! (iM/Δt − ½(K_v − WΦ^{n+1/2})) z^{n+1} = (iM/Δt + ½(K_v − WΦ^{n+1/2})) z^n
//! ```
//!
//! where `K_v = K − v e e^T`. The update is a Cayley transform of a real
//! symmetric matrix, so the lumped mass `z^*Mz` is conserved to rounding.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discrete::DiscreteModel;
use crate::error::{Error, Result};
use crate::grid::{vertex_residual, PiecewiseField};
use crate::linalg::{thomas, SymTridiagonal};
use crate::params::DefectParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Scheme {
    #[default]
    CrankNicolsonRelaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    pub snapshot_stride: usize,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_final: f64, snapshot_stride: usize) -> Result<Self> {
        let cfg = Self {
            dt,
            t_final,
            scheme: Scheme::CrankNicolsonRelaxation,
            snapshot_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final must be at least dt, got {} < {}",
                self.t_final, self.dt
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidConfig("snapshot stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps, `t_final / dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().max(1.0) as usize
    }
}

/// Jump residual above which a field is rejected as initial data.
const JUMP_TOL: f64 = 1e-8;

/// Blow-up is declared when the max norm grows past this factor.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// A trajectory in progress.
#[derive(Debug, Clone)]
pub struct Evolver {
    model: DiscreteModel,
    mu: f64,
    dt: f64,
    laplacian: SymTridiagonal,
    z: Vec<Complex64>,
    /// `φ^{n+1/2}`, the potential for the next step.
    phi: Vec<f64>,
    steps: usize,
}

impl Evolver {
    pub fn new(u0: &PiecewiseField, p: &DefectParams, dt: f64) -> Result<Self> {
        let (jump, _) = vertex_residual(u0, p)?;
        if jump > JUMP_TOL * u0.max_abs().max(1.0) {
            return Err(Error::NotInEnergySpace { residual: jump });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
        }
        let model = DiscreteModel::new(*u0.grid(), p);
        let z = model.pack(u0);
        let laplacian = model.defect_laplacian();
        let mut ev = Self {
            model,
            mu: p.mu(),
            dt,
            laplacian,
            z,
            phi: Vec::new(),
            steps: 0,
        };
        // predictor: one step with the frozen potential |z⁰|^{2μ}
        let frozen = ev.modulus_power(&ev.z);
        let predicted = ev.solve_with(&frozen)?;
        let next = ev.modulus_power(&predicted);
        ev.phi = frozen.iter().zip(&next).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(ev)
    }

    fn modulus_power(&self, z: &[Complex64]) -> Vec<f64> {
        z.iter().map(|z| z.norm_sqr().powf(self.mu)).collect()
    }

    fn solve_with(&self, phi: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.z.len();
        let w = self.model.lp_weight();
        let m = self.model.mass();
        let a = &self.laplacian;
        let inv_dt = 1.0 / self.dt;
        let half_diag: Vec<f64> = (0..n).map(|j| 0.5 * (a.diag[j] - w[j] * phi[j])).collect();
        let half_off: Vec<Complex64> = a.off.iter().map(|o| Complex64::new(0.5 * o, 0.0)).collect();

        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let mut s = Complex64::new(half_diag[j], m[j] * inv_dt) * self.z[j];
            if j > 0 {
                s += half_off[j - 1] * self.z[j - 1];
            }
            if j + 1 < n {
                s += half_off[j] * self.z[j + 1];
            }
            rhs[j] = s;
        }
        let diag: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(-half_diag[j], m[j] * inv_dt))
            .collect();
        let off: Vec<Complex64> = half_off.iter().map(|o| -o).collect();
        thomas(&off, &diag, &off, &mut rhs)?;
        Ok(rhs)
    }

    pub fn step(&mut self) -> Result<()> {
        let next = self.solve_with(&self.phi)?;
        let modulus = self.modulus_power(&next);
        for (phi, m) in self.phi.iter_mut().zip(&modulus) {
            *phi = 2.0 * m - *phi;
        }
        self.z = next;
        self.steps += 1;
        Ok(())
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn model(&self) -> &DiscreteModel {
        &self.model
    }

    /// Packed nodal values.
    pub fn state(&self) -> &[Complex64] {
        &self.z
    }

    pub fn field(&self) -> PiecewiseField {
        self.model.unpack(&self.z)
    }

    pub fn mass(&self) -> f64 {
        self.model.mass_of(&self.z)
    }

    pub fn energy(&self) -> f64 {
        self.model.energy_of(&self.z)
    }

    pub fn max_abs(&self) -> f64 {
        self.z.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// One step from `u` with a fresh predictor.
pub fn step(u: &PiecewiseField, p: &DefectParams, cfg: &EvolutionConfig) -> Result<PiecewiseField> {
    cfg.validate()?;
    let mut ev = Evolver::new(u, p, cfg.dt)?;
    ev.step()?;
    Ok(ev.field())
}

/// Diagnostics at one snapshot time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    /// `NaN` when no reference was given.
    pub orbital_distance: f64,
}

#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    pub times: Vec<f64>,
    pub mass_drift: Vec<f64>,
    pub energy_drift: Vec<f64>,
    pub orbital_distance: Vec<f64>,
    /// Time at which the run stopped on blow-up or a non-finite value.
    pub blow_up: Option<f64>,
    pub final_state: PiecewiseField,
}

impl TrajectoryReport {
    pub fn max_mass_drift(&self) -> f64 {
        self.mass_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_orbital_distance(&self) -> f64 {
        self.orbital_distance.iter().copied().fold(0.0, f64::max)
    }

    pub fn snapshots(&self) -> impl Iterator<Item = Snapshot> + '_ {
        (0..self.times.len()).map(|i| Snapshot {
            t: self.times[i],
            mass_drift: self.mass_drift[i],
            energy_drift: self.energy_drift[i],
            orbital_distance: self.orbital_distance[i],
        })
    }
}

/// `inf_θ ‖a − e^{iθ}b‖` in the discrete `H¹τ` norm with Gram matrix `gram`.
/// The infimum is attained at `θ = arg⟨b, a⟩`.
pub fn orbital_distance(model: &DiscreteModel, gram: &SymTridiagonal, a: &[Complex64], b: &[Complex64]) -> f64 {
    let aa = DiscreteModel::form(gram, a);
    let bb = DiscreteModel::form(gram, b);
    let ab = model.h1_inner(gram, b, a).norm();
    (aa + bb - 2.0 * ab).max(0.0).sqrt()
}

pub fn evolve(
    u0: &PiecewiseField,
    p: &DefectParams,
    cfg: &EvolutionConfig,
    reference: Option<&PiecewiseField>,
) -> Result<TrajectoryReport> {
    evolve_streaming(u0, p, cfg, reference, |_| Ok(()))
}

/// [`evolve`], handing each snapshot to `sink` as it is taken.
pub fn evolve_streaming(
    u0: &PiecewiseField,
    p: &DefectParams,
    cfg: &EvolutionConfig,
    reference: Option<&PiecewiseField>,
    mut sink: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<TrajectoryReport> {
    cfg.validate()?;
    if let Some(r) = reference {
        if r.grid() != u0.grid() {
            return Err(Error::InvalidGrid("reference and initial data use different grids".into()));
        }
    }
    let mut ev = Evolver::new(u0, p, cfg.dt)?;
    let gram = ev.model().gram();
    let reference = reference.map(|r| ev.model().pack(r));
    let m0 = ev.mass();
    let e0 = ev.energy();
    let max0 = ev.max_abs();
    let relative = |x: f64, x0: f64| if x0 == 0.0 { x.abs() } else { (x - x0).abs() / x0.abs() };

    let mut report = TrajectoryReport {
        times: Vec::new(),
        mass_drift: Vec::new(),
        energy_drift: Vec::new(),
        orbital_distance: Vec::new(),
        blow_up: None,
        final_state: u0.clone(),
    };
    let mut record = |ev: &Evolver, report: &mut TrajectoryReport| -> Result<()> {
        let snap = Snapshot {
            t: ev.time(),
            mass_drift: relative(ev.mass(), m0),
            energy_drift: relative(ev.energy(), e0),
            orbital_distance: match &reference {
                Some(r) => orbital_distance(ev.model(), &gram, ev.state(), r),
                None => f64::NAN,
            },
        };
        report.times.push(snap.t);
        report.mass_drift.push(snap.mass_drift);
        report.energy_drift.push(snap.energy_drift);
        report.orbital_distance.push(snap.orbital_distance);
        sink(&snap)
    };

    record(&ev, &mut report)?;
    let steps = cfg.steps();
    for n in 1..=steps {
        ev.step()?;
        let peak = ev.max_abs();
        if !peak.is_finite() || peak > BLOW_UP_FACTOR * max0.max(f64::MIN_POSITIVE) {
            report.blow_up = Some(ev.time());
            record(&ev, &mut report)?;
            break;
        }
        if n % cfg.snapshot_stride == 0 || n == steps {
            record(&ev, &mut report)?;
        }
    }
    report.final_state = ev.field();
    Ok(report)
}

/// `u·(1 + amplitude·f)` with `f` a random sum of Gaussian bumps on each
/// half-line, scaled so `max|f| = 1`. Each sum is even in `|x|` and the
/// right one is corrected by a Gaussian at the origin, so `f` is continuous
/// with `f′(0±) = 0` and `u·(1 + f)` keeps both vertex conditions of `u`.
/// The `0⁺` value is then reset to `τ·u(0⁻)` to remove rounding.
pub fn perturb(u: &PiecewiseField, p: &DefectParams, amplitude: f64, seed: u64) -> PiecewiseField {
    const BUMPS: usize = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = *u.grid();
    let l = grid.half_width();
    let side = |rng: &mut ChaCha8Rng| -> Vec<(f64, f64, f64)> {
        (0..BUMPS)
            .map(|_| {
                let centre = rng.gen_range(0.0..l.min(10.0));
                let width = rng.gen_range(0.5..2.0);
                let height = rng.gen_range(-1.0..1.0);
                (centre, width, height)
            })
            .collect()
    };
    let left = side(&mut rng);
    let right = side(&mut rng);
    // even in r, so f′(0±) = 0 and the flux condition survives too
    let eval = |bumps: &[(f64, f64, f64)], r: f64| -> f64 {
        bumps
            .iter()
            .map(|(c, w, a)| a * ((-((r - c) / w).powi(2)).exp() + (-((r + c) / w).powi(2)).exp()))
            .sum()
    };
    // blend the right factor so both sides agree at the origin
    let gap = eval(&left, 0.0) - eval(&right, 0.0);
    let fm: Vec<f64> = (0..grid.len()).map(|i| eval(&left, -grid.x_minus(i))).collect();
    let fp: Vec<f64> = (0..grid.len())
        .map(|i| {
            let x = grid.x_plus(i);
            eval(&right, x) + gap * (-x * x).exp()
        })
        .collect();
    let peak = fm.iter().chain(&fp).fold(0.0f64, |m, f| m.max(f.abs()));
    let scale = if peak > 0.0 { amplitude / peak } else { 0.0 };
    let minus: Vec<Complex64> = u
        .minus()
        .iter()
        .zip(&fm)
        .map(|(u, f)| u * (1.0 + scale * f))
        .collect();
    let mut plus: Vec<Complex64> = u
        .plus()
        .iter()
        .zip(&fp)
        .map(|(u, f)| u * (1.0 + scale * f))
        .collect();
    plus[0] = minus[grid.n()] * p.tau();
    PiecewiseField::from_values(grid, minus, plus).expect("same grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{branch_tilde, build_stationary};
    use crate::grid::HalfLineGrid;

    fn anchor() -> DefectParams {
        DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(EvolutionConfig::new(0.0, 1.0, 1).is_err());
        assert!(EvolutionConfig::new(0.1, 0.05, 1).is_err());
        assert!(EvolutionConfig::new(0.1, 1.0, 0).is_err());
        assert_eq!(EvolutionConfig::new(0.1, 1.0, 1).unwrap().steps(), 10);
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = HalfLineGrid::new(10.0, 200).unwrap();
        let u = PiecewiseField::zeros(g);
        let cfg = EvolutionConfig::new(0.01, 0.5, 10).unwrap();
        let r = evolve(&u, &anchor(), &cfg, Some(&u)).unwrap();
        assert!(r.final_state.is_zero());
        assert!(r.mass_drift.iter().chain(&r.energy_drift).all(|&d| d == 0.0));
        assert!(r.orbital_distance.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn jump_violation_is_rejected() {
        let g = HalfLineGrid::new(10.0, 200).unwrap();
        let u = PiecewiseField::from_fn(g, |_| 1.0, |_| 1.0);
        let err = Evolver::new(&u, &anchor(), 0.01).unwrap_err();
        assert_eq!(err.kind(), "not-in-energy-space");
    }

    #[test]
    fn perturbation_keeps_the_jump_and_is_reproducible() {
        let p = anchor();
        let g = HalfLineGrid::new(40.0, 800).unwrap();
        let u = build_stationary(&branch_tilde(&p).unwrap(), g).unwrap();
        let a = perturb(&u, &p, 0.01, 7);
        let b = perturb(&u, &p, 0.01, 7);
        assert_eq!(a.minus(), b.minus());
        assert!((a.at_zero_plus() - a.at_zero_minus() * 2.0).norm() < 1e-15);
        let c = perturb(&u, &p, 0.01, 8);
        assert_ne!(a.minus(), c.minus());
    }

    #[test]
    fn ground_state_rotates_in_phase() {
        let p = anchor();
        let g = HalfLineGrid::new(40.0, 2000).unwrap();
        let u = build_stationary(&branch_tilde(&p).unwrap(), g).unwrap();
        let cfg = EvolutionConfig::new(2e-3, 2.0, 100).unwrap();
        let r = evolve(&u, &p, &cfg, Some(&u)).unwrap();
        assert!(r.max_mass_drift() < 1e-12);
        let norm = DiscreteModel::new(g, &p).pack(&u);
        let model = DiscreteModel::new(g, &p);
        let unorm = DiscreteModel::form(&model.gram(), &norm).sqrt();
        assert!(r.max_orbital_distance() < 5e-3 * unorm, "{}", r.max_orbital_distance());
    }
}
