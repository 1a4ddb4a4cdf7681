//! Closed-form stationary states.
//!
//! Away from the origin every stationary state is a translate of the free
//! soliton `φ_ω(x) = (ω(μ+1))^{1/2μ} cosh^{−1/μ}(μ√ω x)`. Writing
//! `T± = tanh(μ√ω x±)` for the two translates, the interface conditions
//! reduce to a line and a fixed hyperbola in the `(T₋, T₊)` plane:
//!
//! ```text
//! T₊ = (T₋ + v/√ω) / τ²
//! T₋² / (1 − τ^{−2μ}) − T₊² / (τ^{2μ} − 1) = 1
//! ```
//!
//! Their intersections inside the open unit square are the two branches,
//! labelled tilde (exists for `ω > v²/(τ²+1)²`) and hat (exists for
//! `ω > v²/(τ²−1)²`).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{HalfLineGrid, PiecewiseField, SolitonPair};
use crate::params::DefectParams;
use crate::quadrature::sech_pow;

/// Free soliton `φ_ω(x)`.
pub fn soliton(omega: f64, mu: f64, x: f64) -> f64 {
    soliton_peak(omega, mu) * sech_pow(mu * omega.sqrt() * x, 1.0 / mu)
}

/// `φ_ω(0) = (ω(μ+1))^{1/2μ}`.
pub fn soliton_peak(omega: f64, mu: f64) -> f64 {
    (omega * (mu + 1.0)).powf(0.5 / mu)
}

/// `φ′_ω(x) = −√ω · tanh(μ√ω x) · φ_ω(x)`.
pub fn soliton_derivative(omega: f64, mu: f64, x: f64) -> f64 {
    let s = omega.sqrt();
    -s * (mu * s * x).tanh() * soliton(omega, mu, x)
}

/// Energy of the linear bound state, `v² / (τ² + 1)²`.
pub fn linear_threshold(p: &DefectParams) -> f64 {
    p.omega_star()
}

/// Existence thresholds and the number of stationary states at `p.omega()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExistenceRegime {
    pub omega_star: f64,
    pub omega_dstar: f64,
    pub count: usize,
}

pub fn regime(p: &DefectParams) -> ExistenceRegime {
    let omega_star = p.omega_star();
    let omega_dstar = p.omega_dstar();
    let w = p.omega();
    let count = if w <= omega_star {
        0
    } else if w <= omega_dstar {
        1
    } else {
        2
    };
    ExistenceRegime {
        omega_star,
        omega_dstar,
        count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchLabel {
    Tilde,
    Hat,
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLabel::Tilde => f.write_str("tilde"),
            BranchLabel::Hat => f.write_str("hat"),
        }
    }
}

/// One solution `(T₋, T₊)` of the matching system with its translates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryBranch {
    label: BranchLabel,
    t_minus: f64,
    t_plus: f64,
    x_minus: f64,
    x_plus: f64,
    #[serde(skip)]
    params: DefectParams,
}

impl StationaryBranch {
    pub fn label(&self) -> BranchLabel {
        self.label
    }

    pub fn t_minus(&self) -> f64 {
        self.t_minus
    }

    pub fn t_plus(&self) -> f64 {
        self.t_plus
    }

    pub fn x_minus(&self) -> f64 {
        self.x_minus
    }

    pub fn x_plus(&self) -> f64 {
        self.x_plus
    }

    pub fn params(&self) -> &DefectParams {
        &self.params
    }

    pub fn pair(&self) -> SolitonPair {
        SolitonPair {
            omega: self.params.omega(),
            mu: self.params.mu(),
            x_minus: self.x_minus,
            x_plus: self.x_plus,
            amplitude: 1.0,
        }
    }

    /// Smallest grid half-width that holds both translates plus ten decay
    /// lengths.
    pub fn required_half_width(&self) -> f64 {
        self.x_minus.abs().max(self.x_plus.abs()) + 10.0 / self.params.sqrt_omega()
    }

    /// Default grid for this branch, widened if the translates sit far out.
    pub fn default_grid(&self) -> HalfLineGrid {
        let p = &self.params;
        let base = HalfLineGrid::for_params(p);
        let need = self.required_half_width() + 20.0 / p.sqrt_omega();
        if base.half_width() >= need {
            base
        } else {
            HalfLineGrid::with_spacing(need, base.spacing())
        }
    }
}

/// Residuals of the two matching equations at `(t_minus, t_plus)`:
/// the line, then the hyperbola.
pub fn system_residual(p: &DefectParams, t_minus: f64, t_plus: f64) -> (f64, f64) {
    let tau2 = p.tau() * p.tau();
    let t2mu = p.tau().powf(2.0 * p.mu());
    let line = t_plus - (t_minus + p.v() / p.sqrt_omega()) / tau2;
    let hyperbola = t_minus * t_minus / (1.0 - 1.0 / t2mu) - t_plus * t_plus / (t2mu - 1.0) - 1.0;
    (line, hyperbola)
}

/// The pieces shared by both branch formulas.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    tau2: f64,
    /// τ^{2μ}
    t2mu: f64,
    /// τ^{2μ} − 1
    e: f64,
    /// τ^{2μ+4} − 1
    d: f64,
    /// v/√ω
    q: f64,
    /// √A(ω), A = (v²/ω)τ^{2μ} + (τ^{2μ+4} − 1)(τ^{2μ} − 1)
    r: f64,
}

impl Coefficients {
    fn new(tau: f64, v: f64, mu: f64, omega: f64) -> Self {
        let ln_tau = tau.ln();
        let e = (2.0 * mu * ln_tau).exp_m1();
        let d = ((2.0 * mu + 4.0) * ln_tau).exp_m1();
        let t2mu = e + 1.0;
        let q = v / omega.sqrt();
        // d and e share a sign, so the product is a sum of two nonnegative terms.
        let de = d.abs() * e.abs();
        let a = q * q * t2mu + de;
        debug_assert!(a >= 0.0);
        Self {
            tau2: tau * tau,
            t2mu,
            e,
            d,
            q,
            r: a.sqrt(),
        }
    }

    /// Tilde pair in rationalized form (no cancellation between `q` and `τ²√A`).
    fn tilde(&self) -> (f64, f64) {
        let Self {
            tau2,
            t2mu,
            e,
            q,
            r,
            ..
        } = *self;
        let t_minus = -(q * q + tau2 * tau2 * e) / (q + tau2 * r);
        let t_plus = (q * q * t2mu - e) / (t2mu * tau2 * q + r);
        (t_minus, t_plus)
    }

    fn hat(&self) -> (f64, f64) {
        let Self {
            tau2,
            t2mu,
            d,
            q,
            r,
            ..
        } = *self;
        ((q + tau2 * r) / d, (t2mu * tau2 * q + r) / d)
    }
}

/// Both closed-form intersections of the line and hyperbola, `(tilde, hat)`,
/// whether or not they lie in the unit square. `v = 0` is allowed here.
pub fn branch_points(tau: f64, v: f64, mu: f64, omega: f64) -> ((f64, f64), (f64, f64)) {
    let c = Coefficients::new(tau, v, mu, omega);
    (c.tilde(), c.hat())
}

/// `arctanh(t) / (μ√ω)` through the log form.
fn translate(t: f64, mu: f64, omega: f64) -> f64 {
    // atanh(t) = ½ ln((1 + t)/(1 − t)) = ½ ln1p(2t/(1 − t))
    0.5 * (2.0 * t / (1.0 - t)).ln_1p() / (mu * omega.sqrt())
}

fn in_open_square(t: (f64, f64)) -> bool {
    t.0.abs() < 1.0 && t.1.abs() < 1.0 && t.0.is_finite() && t.1.is_finite()
}

fn no_solution(p: &DefectParams, branch: BranchLabel) -> Error {
    Error::NoSolution {
        branch,
        omega: p.omega(),
        omega_star: p.omega_star(),
        omega_dstar: p.omega_dstar(),
    }
}

fn make_branch(p: &DefectParams, label: BranchLabel, t: (f64, f64)) -> Result<StationaryBranch> {
    if !in_open_square(t) {
        return Err(no_solution(p, label));
    }
    Ok(StationaryBranch {
        label,
        t_minus: t.0,
        t_plus: t.1,
        x_minus: translate(t.0, p.mu(), p.omega()),
        x_plus: translate(t.1, p.mu(), p.omega()),
        params: *p,
    })
}

/// The branch that exists for every `ω > v²/(τ²+1)²`; it is the ground state.
pub fn branch_tilde(p: &DefectParams) -> Result<StationaryBranch> {
    if p.omega() <= p.omega_star() {
        return Err(no_solution(p, BranchLabel::Tilde));
    }
    let c = Coefficients::new(p.tau(), p.v(), p.mu(), p.omega());
    make_branch(p, BranchLabel::Tilde, c.tilde())
}

/// The second branch, present only for `ω > v²/(τ²−1)²`.
pub fn branch_hat(p: &DefectParams) -> Result<StationaryBranch> {
    if p.omega() <= p.omega_dstar() {
        return Err(no_solution(p, BranchLabel::Hat));
    }
    let c = Coefficients::new(p.tau(), p.v(), p.mu(), p.omega());
    make_branch(p, BranchLabel::Hat, c.hat())
}

/// All branches that exist at `p`, tilde first.
pub fn branches(p: &DefectParams) -> Vec<StationaryBranch> {
    [branch_tilde(p), branch_hat(p)]
        .into_iter()
        .filter_map(Result::ok)
        .collect()
}

/// `(dT̃₋/dω, dT̃₊/dω)` from differentiating the explicit formulas.
pub fn tilde_omega_derivatives(p: &DefectParams) -> (f64, f64) {
    let c = Coefficients::new(p.tau(), p.v(), p.mu(), p.omega());
    let w = p.omega();
    let v = p.v();
    let pre = -v / (2.0 * c.d);
    let w32 = w * w.sqrt();
    let tail = v / (w * w * c.r);
    let t2mu2 = c.t2mu * c.tau2;
    (
        pre * (1.0 / w32 - t2mu2 * tail),
        pre * (t2mu2 / w32 - c.t2mu * tail),
    )
}

/// Sample a branch on a grid.
pub fn build_stationary(b: &StationaryBranch, grid: HalfLineGrid) -> Result<PiecewiseField> {
    let required = b.required_half_width();
    if grid.half_width() < required {
        return Err(Error::Truncation {
            required,
            available: grid.half_width(),
        });
    }
    Ok(PiecewiseField::from_pair(grid, b.pair()))
}

/// `√((1 − τ^{2μ}) / (1 − τ^{2μ+4}))`, the tanh of the dipole translate
/// on the side closer to the defect.
pub fn dipole_ratio(tau: f64, mu: f64) -> f64 {
    let ln_tau = tau.ln();
    let e = (2.0 * mu * ln_tau).exp_m1();
    let d = ((2.0 * mu + 4.0) * ln_tau).exp_m1();
    (e / d).sqrt()
}

/// Translates of the `v = 0` comparison state (the dipole state).
///
/// This is the tilde intersection with `v = 0`: `(T₋, T₊) = −sgn(τ−1)·(τ²s, s)`
/// with `s` from [`dipole_ratio`].
pub fn dipole_pair(p: &DefectParams) -> SolitonPair {
    let ((t_minus, t_plus), _) = branch_points(p.tau(), 0.0, p.mu(), p.omega());
    SolitonPair {
        omega: p.omega(),
        mu: p.mu(),
        x_minus: translate(t_minus, p.mu(), p.omega()),
        x_plus: translate(t_plus, p.mu(), p.omega()),
        amplitude: 1.0,
    }
}

/// The dipole state sampled on `grid`. It ignores `p.v()`.
pub fn dipole_state(p: &DefectParams, grid: HalfLineGrid) -> PiecewiseField {
    PiecewiseField::from_pair(grid, dipole_pair(p))
}
