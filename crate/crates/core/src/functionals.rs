//! Energy, action, Nehari functional and reduced action.

use serde::Serialize;

use crate::closedform::StationaryBranch;
use crate::error::{Error, Result};
use crate::grid::{corrected_trapezoid, PiecewiseField};
use crate::params::DefectParams;
use crate::quadrature::{full_power_integral, power_integral};

/// The four basic integrals of a field and every functional built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalReport {
    /// `‖u′‖²` summed over both half-lines.
    pub kinetic: f64,
    /// `‖u‖²₂`
    pub mass2: f64,
    /// `‖u‖^{2μ+2}_{2μ+2}`
    pub lp: f64,
    /// `|u(0⁻)|²`
    pub defect: f64,
    pub energy: f64,
    pub action: f64,
    pub nehari: f64,
    pub reduced: f64,
}

impl FunctionalReport {
    pub fn from_parts(kinetic: f64, mass2: f64, lp: f64, defect: f64, p: &DefectParams) -> Self {
        let mu = p.mu();
        let v = p.v();
        let w = p.omega();
        let energy = 0.5 * kinetic - lp / (2.0 * mu + 2.0) - 0.5 * v * defect;
        Self {
            kinetic,
            mass2,
            lp,
            defect,
            energy,
            action: energy + 0.5 * w * mass2,
            nehari: kinetic - lp - v * defect + w * mass2,
            reduced: mu / (2.0 * (mu + 1.0)) * lp,
        }
    }

    /// `‖u′‖² − v|u(0⁻)|² + ω‖u‖²`, the quadratic part of the Nehari functional.
    pub fn quadratic(&self, p: &DefectParams) -> f64 {
        self.kinetic - p.v() * self.defect + p.omega() * self.mass2
    }

    /// `|I_ω(u)| ≤ 1e-8 · max(1, ‖u‖^{2μ+2}_{2μ+2})`.
    pub fn on_manifold(&self) -> bool {
        self.nehari.abs() <= ON_MANIFOLD_TOL * self.lp.max(1.0)
    }
}

pub const ON_MANIFOLD_TOL: f64 = 1e-8;

/// Quadrature of all functionals on a sampled field.
///
/// Integrals use the endpoint-corrected trapezoid rule on each half-line;
/// derivative samples come from the closed form when the field has one.
pub fn evaluate(u: &PiecewiseField, p: &DefectParams) -> FunctionalReport {
    let h = u.grid().spacing();
    let power = p.mu() + 1.0;
    let (dm, dp) = u.derivatives();
    let side = |vals: &[num_complex::Complex64], f: &dyn Fn(f64) -> f64| -> f64 {
        let s: Vec<f64> = vals.iter().map(|z| f(z.norm_sqr())).collect();
        corrected_trapezoid(&s, h)
    };
    let id = |x: f64| x;
    let lp_fn = |x: f64| x.powf(power);
    let mass2 = side(u.minus(), &id) + side(u.plus(), &id);
    let lp = side(u.minus(), &lp_fn) + side(u.plus(), &lp_fn);
    let kinetic = side(&dm, &id) + side(&dp, &id);
    let defect = u.at_zero_minus().norm_sqr();
    FunctionalReport::from_parts(kinetic, mass2, lp, defect, p)
}

/// The four integrals of a stationary branch in closed form, via the
/// `t = tanh(μ√ω s)` substitution.
pub fn closed_form_report(b: &StationaryBranch) -> FunctionalReport {
    let p = b.params();
    let mu = p.mu();
    let w = p.omega();
    let (tm, tp) = (b.t_minus(), b.t_plus());
    let c = (mu + 1.0).powf(1.0 / mu);
    let k = 1.0 / mu;

    let outer_k = full_power_integral(k) - power_integral(tm, tp, k);
    let outer_km1 = full_power_integral(k - 1.0) - power_integral(tm, tp, k - 1.0);
    let boundary = tp * (1.0 - tp * tp).powf(k) - tm * (1.0 - tm * tm).powf(k);

    let kinetic = 0.5 * c * w.powf(k + 0.5) * (outer_k + boundary);
    let mass2 = c / mu * w.powf(k - 0.5) * outer_km1;
    let lp = c * (mu + 1.0) / mu * w.powf(k + 0.5) * outer_k;
    let defect = c * w.powf(k) * (1.0 - tm * tm).powf(k);
    FunctionalReport::from_parts(kinetic, mass2, lp, defect, p)
}

/// `α(u) = ((‖u′‖² − v|u(0⁻)|² + ω‖u‖²) / ‖u‖^{2μ+2}_{2μ+2})^{1/2μ}`, the
/// factor that moves `u` onto the Nehari manifold.
pub fn nehari_scale(u: &PiecewiseField, p: &DefectParams) -> Result<f64> {
    if u.is_zero() {
        return Err(Error::UndefinedScale);
    }
    scale_from_report(&evaluate(u, p), p)
}

pub(crate) fn scale_from_report(r: &FunctionalReport, p: &DefectParams) -> Result<f64> {
    let numerator = r.quadratic(p);
    if r.lp <= 0.0 {
        return Err(Error::UndefinedScale);
    }
    if numerator <= 0.0 {
        return Err(Error::CoercivityViolated { numerator });
    }
    Ok((numerator / r.lp).powf(0.5 / p.mu()))
}

/// `α(u)·u`.
pub fn project_to_nehari(u: &PiecewiseField, p: &DefectParams) -> Result<PiecewiseField> {
    Ok(u.scaled(nehari_scale(u, p)?))
}

/// The two coefficients `(1 − v/(a(τ²+1)), ω − va/(τ²+1))` bounding the
/// quadratic form from below for a given splitting parameter `a`.
pub fn coercivity_bounds(p: &DefectParams, a: f64) -> (f64, f64) {
    let k = p.tau() * p.tau() + 1.0;
    (1.0 - p.v() / (a * k), p.omega() - p.v() * a / k)
}

/// Constant `C` with `‖u′‖² − v|u(0⁻)|² + ω‖u‖² ≥ C‖u‖²_{H¹τ}`.
///
/// Returns `max_a min(coercivity_bounds(a))` over the admissible interval
/// `v/(τ²+1) < a < ω(τ²+1)/v`; the maximum sits where the two bounds cross.
pub fn coercivity_constant(p: &DefectParams) -> Result<f64> {
    if p.omega() <= p.omega_star() {
        return Err(Error::EmptyInterval {
            omega: p.omega(),
            omega_star: p.omega_star(),
        });
    }
    let k = p.tau() * p.tau() + 1.0;
    let v = p.v();
    // v a² + (1 − ω) k a − v = 0
    let b = (1.0 - p.omega()) * k;
    let disc = (b * b + 4.0 * v * v).sqrt();
    let a = if b < 0.0 {
        (disc - b) / (2.0 * v)
    } else {
        2.0 * v / (disc + b)
    };
    let (c1, c2) = coercivity_bounds(p, a);
    Ok(c1.min(c2))
}
