//! Half-line grids and piecewise fields on the line cut at the defect.
//!
//! The origin is stored twice: once as the last node of the left half-line
//! (the `0⁻` limit) and once as the first node of the right half-line (the
//! `0⁺` limit). Nothing in this module couples the two sides except the
//! explicit interface checks.

use num_complex::Complex64;

use crate::closedform::{soliton, soliton_derivative};
use crate::error::{Error, Result};
use crate::params::DefectParams;

/// Smallest admissible number of intervals per half-line.
pub const MIN_POINTS: usize = 16;

/// Uniform grid on `[-L, 0⁻] ∪ [0⁺, L]` with `n` intervals per side.
///
/// Both sides carry `n + 1` nodes; node `n` on the left and node `0` on the
/// right are the two one-sided limits at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineGrid {
    half_width: f64,
    n: usize,
}

impl HalfLineGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points per half-line, got {n}"
            )));
        }
        Ok(Self { half_width, n })
    }

    /// Default grid for a frequency and power: half-width
    /// `max(40, 12/√ω)·max(1, 1/μ)` and spacing `0.01 / max(1, μ√ω)`.
    pub fn for_params(p: &DefectParams) -> Self {
        let half_width = default_half_width(p.omega(), p.mu());
        Self::with_spacing(half_width, default_spacing(p.omega(), p.mu()))
    }

    /// Grid with the given half-width and a spacing no larger than `h`.
    pub fn with_spacing(half_width: f64, h: f64) -> Self {
        let n = ((half_width / h).ceil() as usize).max(MIN_POINTS);
        Self { half_width, n }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Intervals per half-line.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Nodes per half-line (`n + 1`).
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.half_width / self.n as f64
    }

    /// Position of left node `i`; `i = n` is `0⁻`.
    pub fn x_minus(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Position of right node `i`; `i = 0` is `0⁺`.
    pub fn x_plus(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Same half-width, twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            n: 2 * self.n,
        }
    }
}

pub(crate) fn default_half_width(omega: f64, mu: f64) -> f64 {
    f64::max(40.0, 12.0 / omega.sqrt()) * f64::max(1.0, 1.0 / mu)
}

pub(crate) fn default_spacing(omega: f64, mu: f64) -> f64 {
    0.01 / f64::max(1.0, mu * omega.sqrt())
}

/// Closed-form descriptor of a field made of two soliton translates:
/// `a·φ_ω(x + x₋)` for `x < 0` and `a·φ_ω(x + x₊)` for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonPair {
    pub omega: f64,
    pub mu: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub amplitude: f64,
}

impl SolitonPair {
    pub fn value_minus(&self, x: f64) -> f64 {
        self.amplitude * soliton(self.omega, self.mu, x + self.x_minus)
    }

    pub fn value_plus(&self, x: f64) -> f64 {
        self.amplitude * soliton(self.omega, self.mu, x + self.x_plus)
    }

    pub fn derivative_minus(&self, x: f64) -> f64 {
        self.amplitude * soliton_derivative(self.omega, self.mu, x + self.x_minus)
    }

    pub fn derivative_plus(&self, x: f64) -> f64 {
        self.amplitude * soliton_derivative(self.omega, self.mu, x + self.x_plus)
    }
}

/// Complex samples on both half-lines, with an optional closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseField {
    grid: HalfLineGrid,
    minus: Vec<Complex64>,
    plus: Vec<Complex64>,
    analytic: Option<SolitonPair>,
}

impl PiecewiseField {
    pub fn from_values(
        grid: HalfLineGrid,
        minus: Vec<Complex64>,
        plus: Vec<Complex64>,
    ) -> Result<Self> {
        if minus.len() != grid.len() || plus.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples per side, got {} and {}",
                grid.len(),
                minus.len(),
                plus.len()
            )));
        }
        Ok(Self {
            grid,
            minus,
            plus,
            analytic: None,
        })
    }

    pub fn from_real(grid: HalfLineGrid, minus: &[f64], plus: &[f64]) -> Result<Self> {
        Self::from_values(
            grid,
            minus.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            plus.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Sample a real function given separately on each side.
    pub fn from_fn(
        grid: HalfLineGrid,
        f_minus: impl Fn(f64) -> f64,
        f_plus: impl Fn(f64) -> f64,
    ) -> Self {
        let minus = (0..grid.len())
            .map(|i| Complex64::new(f_minus(grid.x_minus(i)), 0.0))
            .collect();
        let plus = (0..grid.len())
            .map(|i| Complex64::new(f_plus(grid.x_plus(i)), 0.0))
            .collect();
        Self {
            grid,
            minus,
            plus,
            analytic: None,
        }
    }

    pub fn from_pair(grid: HalfLineGrid, pair: SolitonPair) -> Self {
        let mut field = Self::from_fn(grid, |x| pair.value_minus(x), |x| pair.value_plus(x));
        field.analytic = Some(pair);
        field
    }

    pub fn zeros(grid: HalfLineGrid) -> Self {
        Self::from_fn(grid, |_| 0.0, |_| 0.0)
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    pub fn minus(&self) -> &[Complex64] {
        &self.minus
    }

    pub fn plus(&self) -> &[Complex64] {
        &self.plus
    }

    pub fn analytic(&self) -> Option<&SolitonPair> {
        self.analytic.as_ref()
    }

    /// Drop the closed form (e.g. after editing samples).
    pub fn without_analytic(mut self) -> Self {
        self.analytic = None;
        self
    }

    pub fn at_zero_minus(&self) -> Complex64 {
        self.minus[self.grid.n]
    }

    pub fn at_zero_plus(&self) -> Complex64 {
        self.plus[0]
    }

    /// Multiply by a real constant; the closed form follows along.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            minus: self.minus.iter().map(|z| z * c).collect(),
            plus: self.plus.iter().map(|z| z * c).collect(),
            analytic: self.analytic.map(|mut pair| {
                pair.amplitude *= c;
                pair
            }),
        }
    }

    /// Multiply by a complex constant. The closed form is real and is dropped
    /// unless `c` is real.
    pub fn scaled_complex(&self, c: Complex64) -> Self {
        if c.im == 0.0 {
            return self.scaled(c.re);
        }
        Self {
            grid: self.grid,
            minus: self.minus.iter().map(|z| z * c).collect(),
            plus: self.plus.iter().map(|z| z * c).collect(),
            analytic: None,
        }
    }

    pub fn map_values(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let g = self.grid;
        Self {
            grid: g,
            minus: self.minus.iter().enumerate().map(|(i, &z)| f(g.x_minus(i), z)).collect(),
            plus: self.plus.iter().enumerate().map(|(i, &z)| f(g.x_plus(i), z)).collect(),
            analytic: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.minus.iter().chain(&self.plus).all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.minus
            .iter()
            .chain(&self.plus)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Real parts, left then right.
    pub fn real_parts(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.minus.iter().map(|z| z.re).collect(),
            self.plus.iter().map(|z| z.re).collect(),
        )
    }

    /// Derivative samples on both sides: exact from the closed form when
    /// present, otherwise finite differences.
    pub fn derivatives(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        match &self.analytic {
            Some(pair) => {
                let g = self.grid;
                (
                    (0..g.len())
                        .map(|i| Complex64::new(pair.derivative_minus(g.x_minus(i)), 0.0))
                        .collect(),
                    (0..g.len())
                        .map(|i| Complex64::new(pair.derivative_plus(g.x_plus(i)), 0.0))
                        .collect(),
                )
            }
            None => self.difference_derivatives(),
        }
    }

    /// Centered differences inside, second-order one-sided stencils at both
    /// ends of each half-line. Never looks across the origin.
    pub fn difference_derivatives(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let h = self.grid.spacing();
        (
            difference_derivative(&self.minus, h),
            difference_derivative(&self.plus, h),
        )
    }

    /// One-sided limits `(u′(0⁻), u′(0⁺))`.
    pub fn derivatives_at_zero(&self) -> (Complex64, Complex64) {
        match &self.analytic {
            Some(pair) => (
                Complex64::new(pair.derivative_minus(0.0), 0.0),
                Complex64::new(pair.derivative_plus(0.0), 0.0),
            ),
            None => {
                let h = self.grid.spacing();
                let n = self.grid.n;
                let m = &self.minus;
                let p = &self.plus;
                (
                    (m[n] * 3.0 - m[n - 1] * 4.0 + m[n - 2]) / (2.0 * h),
                    (p[0] * -3.0 + p[1] * 4.0 - p[2]) / (2.0 * h),
                )
            }
        }
    }
}

fn difference_derivative(u: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = u.len() - 1;
    let mut d = Vec::with_capacity(u.len());
    d.push((u[0] * -3.0 + u[1] * 4.0 - u[2]) / (2.0 * h));
    for i in 1..n {
        d.push((u[i + 1] - u[i - 1]) / (2.0 * h));
    }
    d.push((u[n] * 3.0 - u[n - 1] * 4.0 + u[n - 2]) / (2.0 * h));
    d
}

/// Composite trapezoid rule over uniformly spaced samples.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = f[1..n - 1].iter().sum();
    h * (inner + 0.5 * (f[0] + f[n - 1]))
}

/// Trapezoid rule with the leading Euler–Maclaurin endpoint correction,
/// endpoint slopes from one-sided 3-point stencils. Fourth order for smooth
/// integrands.
pub fn corrected_trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 3 {
        return trapezoid(f, h);
    }
    let k = n - 1;
    let slope_a = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    let slope_b = (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * h);
    trapezoid(f, h) - h * h / 12.0 * (slope_b - slope_a)
}

/// Interface residuals `(|u(0⁺) − τu(0⁻)|, |u′(0⁻) − τu′(0⁺) − v·u(0⁻)|)`.
///
/// Both vanish on the operator domain; only the first matters for membership
/// in the energy space. Uses the closed form when the field carries one.
pub fn vertex_residual(u: &PiecewiseField, p: &DefectParams) -> Result<(f64, f64)> {
    if u.grid.n < 3 {
        return Err(Error::InvalidGrid(
            "need at least 3 nodes per side for one-sided stencils".into(),
        ));
    }
    let tau = p.tau();
    let (u0m, u0p) = match &u.analytic {
        Some(pair) => (
            Complex64::new(pair.value_minus(0.0), 0.0),
            Complex64::new(pair.value_plus(0.0), 0.0),
        ),
        None => (u.at_zero_minus(), u.at_zero_plus()),
    };
    let (d0m, d0p) = u.derivatives_at_zero();
    let jump = (u0p - u0m * tau).norm();
    let flux = (d0m - d0p * tau - u0m * p.v()).norm();
    Ok((jump, flux))
}

/// `‖u‖_{H¹τ} = (‖u‖²₂ + ‖u′‖²_{L²(ℝ₋)} + ‖u′‖²_{L²(ℝ₊)})^{1/2}`, with
/// finite-difference derivatives and the trapezoid rule on each side.
pub fn h1tau_norm(u: &PiecewiseField) -> f64 {
    let h = u.grid.spacing();
    let (dm, dp) = u.difference_derivatives();
    let sq = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>();
    let total = trapezoid(&sq(&u.minus), h)
        + trapezoid(&sq(&u.plus), h)
        + trapezoid(&sq(&dm), h)
        + trapezoid(&sq(&dp), h);
    total.sqrt()
}
