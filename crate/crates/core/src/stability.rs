//! The mass curve `M(ω) = ‖u_T̃‖²₂` and the Grillakis–Shatah–Strauss verdict.
//!
//! With `k = 1/μ`,
//!
//! ```text
//! φ(ω) = ∫_{T̃₋}^{T̃₊} (1 − t²)^{k−1} dt
//! M(ω) = ((μ+1)^k / μ) · ω^{k−1/2} · (∫_{−1}^{1} (1 − t²)^{k−1} dt − φ(ω))
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{branch_hat, branch_tilde, regime, tilde_omega_derivatives, StationaryBranch};
use crate::error::{Error, Result};
use crate::functionals::closed_form_report;
use crate::grid::HalfLineGrid;
use crate::params::DefectParams;
use crate::quadrature::{full_power_integral, power_integral};
use crate::spectral::{build_operator, spectral_report, OperatorKind};

pub fn phi(p: &DefectParams) -> Result<f64> {
    let b = branch_tilde(p)?;
    Ok(power_integral(b.t_minus(), b.t_plus(), 1.0 / p.mu() - 1.0))
}

/// `φ′(ω)` from the explicit derivatives of `T̃±`.
pub fn dphi(p: &DefectParams) -> Result<f64> {
    let b = branch_tilde(p)?;
    let (dm, dp) = tilde_omega_derivatives(p);
    let e = 1.0 / p.mu() - 1.0;
    let weight = |t: f64| (1.0 - t * t).powf(e);
    Ok(weight(b.t_plus()) * dp - weight(b.t_minus()) * dm)
}

fn prefactor(p: &DefectParams) -> f64 {
    let k = 1.0 / p.mu();
    (p.mu() + 1.0).powf(k) / p.mu() * p.omega().powf(k - 0.5)
}

pub fn mass(p: &DefectParams) -> Result<f64> {
    let full = full_power_integral(1.0 / p.mu() - 1.0);
    Ok(prefactor(p) * (full - phi(p)?))
}

/// `M′(ω)` by differentiating the closed form.
pub fn dmass_analytic(p: &DefectParams) -> Result<f64> {
    let k = 1.0 / p.mu();
    let xi = prefactor(p);
    let dxi = xi * (k - 0.5) / p.omega();
    let full = full_power_integral(k - 1.0);
    Ok(dxi * (full - phi(p)?) - xi * dphi(p)?)
}

/// Five-point centered difference of `M` with step `h`.
pub fn dmass_difference(p: &DefectParams, h: f64) -> Result<f64> {
    let w = p.omega();
    if w - 5.0 * h <= p.omega_star() {
        return Err(Error::ThresholdProximity {
            omega: w,
            omega_star: p.omega_star(),
            step: h,
        });
    }
    let m = |dw: f64| -> Result<f64> { mass(&p.with_omega(w + dw)?) };
    Ok((m(-2.0 * h)? - 8.0 * m(-h)? + 8.0 * m(h)? - m(2.0 * h)?) / (12.0 * h))
}

/// Relative step for the difference quotient.
pub const DMASS_REL_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Unstable,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub omega: f64,
    pub mass: f64,
    /// Five-point difference estimate of `M′(ω)`.
    pub dmass: f64,
    pub phi: f64,
    pub dphi: f64,
    /// Whether the step-halving check agreed to 1%.
    pub richardson_ok: bool,
    pub spectral_ok: bool,
    pub verdict: Verdict,
}

/// Verdict with spectral conditions taken as given, or checked on the
/// default grid when `run_spectral` is set.
pub fn gss_verdict(p: &DefectParams, run_spectral: bool) -> Result<StabilityVerdict> {
    let spectral_ok = if run_spectral {
        spectral_conditions(p, HalfLineGrid::for_params(p))?
    } else {
        true
    };
    verdict_with(p, spectral_ok)
}

/// Both operators on `grid` have the GSS shape.
pub fn spectral_conditions(p: &DefectParams, grid: HalfLineGrid) -> Result<bool> {
    let l1 = spectral_report(&build_operator(OperatorKind::L1, p, grid)?)?;
    let l2 = spectral_report(&build_operator(OperatorKind::L2, p, grid)?)?;
    Ok(l1.meets_gss() && l2.meets_gss())
}

fn verdict_with(p: &DefectParams, spectral_ok: bool) -> Result<StabilityVerdict> {
    let h = DMASS_REL_STEP * p.omega();
    let dmass = dmass_difference(p, h)?;
    let half = dmass_difference(p, 0.5 * h)?;
    let richardson_ok = (half - dmass).abs() <= 0.01 * dmass.abs().max(half.abs());
    let m = mass(p)?;
    let tol = 1e-8 * m / p.omega();
    let verdict = if !spectral_ok || !richardson_ok || dmass.abs() <= tol {
        Verdict::Inconclusive
    } else if dmass > 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok(StabilityVerdict {
        omega: p.omega(),
        mass: m,
        dmass,
        phi: phi(p)?,
        dphi: dphi(p)?,
        richardson_ok,
        spectral_ok,
        verdict,
    })
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ω` or `ln ω`.
pub fn omega_grid(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "omega range",
            value: lo,
            reason: "need 0 < omega-min <= omega-max",
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "omega-steps",
            value: 0.0,
            reason: "need at least one point",
        });
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else if log {
                (lo.ln() + step(i) * (hi.ln() - lo.ln())).exp()
            } else {
                lo + step(i) * (hi - lo)
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchColumns {
    pub t_minus: f64,
    pub t_plus: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub mass: f64,
    pub reduced: f64,
}

impl BranchColumns {
    fn of(b: &StationaryBranch) -> Self {
        let r = closed_form_report(b);
        Self {
            t_minus: b.t_minus(),
            t_plus: b.t_plus(),
            x_minus: b.x_minus(),
            x_plus: b.x_plus(),
            mass: r.mass2,
            reduced: r.reduced,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationRow {
    pub omega: f64,
    pub count: usize,
    pub tilde: Option<BranchColumns>,
    pub hat: Option<BranchColumns>,
    pub verdict: Option<Verdict>,
    /// Error text for a row that could not be evaluated.
    pub error: Option<String>,
}

/// One row per `ω`, evaluated in parallel, returned in input order.
/// The `ω` stored in `base` is ignored.
pub fn bifurcation_sweep(base: &DefectParams, omegas: &[f64]) -> Vec<BifurcationRow> {
    omegas.par_iter().map(|&w| bifurcation_row(base, w)).collect()
}

fn bifurcation_row(base: &DefectParams, omega: f64) -> BifurcationRow {
    let mut row = BifurcationRow {
        omega,
        count: 0,
        tilde: None,
        hat: None,
        verdict: None,
        error: None,
    };
    let p = match base.with_omega(omega) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.count = regime(&p).count;
    row.tilde = branch_tilde(&p).ok().map(|b| BranchColumns::of(&b));
    row.hat = branch_hat(&p).ok().map(|b| BranchColumns::of(&b));
    if row.tilde.is_some() {
        match gss_verdict(&p, false) {
            Ok(v) => row.verdict = Some(v.verdict),
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassPoint {
    pub omega: f64,
    pub mass: f64,
    pub dmass: f64,
    pub phi: f64,
    pub verdict: Verdict,
}

/// `M`, `M′`, `φ` and the verdict along a grid, in parallel, in input order.
/// Points at or below the threshold are reported as errors in place.
pub fn mass_curve(base: &DefectParams, omegas: &[f64]) -> Vec<Result<MassPoint>> {
    omegas
        .par_iter()
        .map(|&w| {
            let v = gss_verdict(&base.with_omega(w)?, false)?;
            Ok(MassPoint {
                omega: w,
                mass: v.mass,
                dmass: v.dmass,
                phi: v.phi,
                verdict: v.verdict,
            })
        })
        .collect()
}

/// Every `ω` in `(lo, hi)` where `M′` changes sign, located by bisection
/// on the closed-form derivative after a log-spaced scan with `scan` points.
pub fn locate_critical_omega(base: &DefectParams, lo: f64, hi: f64, scan: usize) -> Result<Vec<f64>> {
    let lo = lo.max(base.omega_star() * (1.0 + 1e-9));
    let grid = omega_grid(lo, hi, scan.max(2), true)?;
    let signs: Vec<f64> = grid
        .par_iter()
        .map(|&w| dmass_analytic(&base.with_omega(w)?))
        .collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for i in 1..grid.len() {
        if signs[i - 1].signum() != signs[i].signum() {
            let (mut a, mut b) = (grid[i - 1], grid[i]);
            let fa = signs[i - 1];
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = dmass_analytic(&base.with_omega(m)?)?;
                if fm.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    Ok(roots)
}
