//! Oracles shared by the integration tests. Nothing here calls the closed
//! forms of the library.
#![allow(dead_code)]

/// Residual of the matching system at `(a, b) = (T₋, T₊)`.
pub fn residual(tau: f64, v: f64, mu: f64, omega: f64, a: f64, b: f64) -> [f64; 2] {
    let q = v / omega.sqrt();
    let t2m = tau.powf(2.0 * mu);
    [
        b - (a + q) / (tau * tau),
        a * a / (1.0 - 1.0 / t2m) - b * b / (t2m - 1.0) - 1.0,
    ]
}

fn jacobian(tau: f64, mu: f64, a: f64, b: f64) -> [[f64; 2]; 2] {
    let t2m = tau.powf(2.0 * mu);
    [
        [-1.0 / (tau * tau), 1.0],
        [2.0 * a / (1.0 - 1.0 / t2m), -2.0 * b / (t2m - 1.0)],
    ]
}

/// Plain 2D Newton from `(a, b)`.
pub fn newton(tau: f64, v: f64, mu: f64, omega: f64, mut a: f64, mut b: f64) -> Option<(f64, f64)> {
    for _ in 0..100 {
        let r = residual(tau, v, mu, omega, a, b);
        let j = jacobian(tau, mu, a, b);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let da = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let db = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        a -= da;
        b -= db;
        if da.abs() + db.abs() < 1e-15 * (1.0 + a.abs() + b.abs()) {
            break;
        }
    }
    let r = residual(tau, v, mu, omega, a, b);
    (r[0].abs() + r[1].abs() < 1e-12).then_some((a, b))
}

/// All roots with `T₋, T₊ ∈ (−1, 1)`: scan `T₋` along the line for sign
/// changes of the conic residual, then polish each with Newton.
pub fn all_roots(tau: f64, v: f64, mu: f64, omega: f64) -> Vec<(f64, f64)> {
    let q = v / omega.sqrt();
    let line = |a: f64| (a + q) / (tau * tau);
    let g = |a: f64| residual(tau, v, mu, omega, a, line(a))[1];
    let n = 20_000;
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let mut prev = (-1.0, g(-1.0));
    for i in 1..=n {
        let a = -1.0 + 2.0 * i as f64 / n as f64;
        let ga = g(a);
        if prev.1.signum() != ga.signum() || ga == 0.0 {
            // bisect, then polish in 2D
            let (mut lo, mut hi) = (prev.0, a);
            for _ in 0..80 {
                let m = 0.5 * (lo + hi);
                if g(m).signum() == g(lo).signum() {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            let guess = 0.5 * (lo + hi);
            if let Some((ta, tb)) = newton(tau, v, mu, omega, guess, line(guess)) {
                if ta.abs() < 1.0 && tb.abs() < 1.0 && !roots.iter().any(|r| (r.0 - ta).abs() < 1e-9) {
                    roots.push((ta, tb));
                }
            }
        }
        prev = (a, ga);
    }
    roots
}

/// `(ω(μ+1))^{1/2μ} sech^{1/μ}(μ√ω x)`, written out directly.
pub fn soliton(omega: f64, mu: f64, x: f64) -> f64 {
    (omega * (mu + 1.0)).powf(0.5 / mu) / (mu * omega.sqrt() * x).cosh().powf(1.0 / mu)
}

use nehari_ft::{HalfLineGrid, PiecewiseField};
use rand::Rng;

/// A smooth random field in the energy space: Gaussian bumps on the left,
/// and on the right a tail matching `τ·u(0⁻)` plus bumps that vanish at 0.
pub fn random_field(rng: &mut impl Rng, grid: HalfLineGrid, tau: f64) -> PiecewiseField {
    let bumps = |rng: &mut dyn rand::RngCore| -> Vec<(f64, f64, f64)> {
        (0..4)
            .map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.4..2.5), rng.gen_range(-1.5..1.5)))
            .collect()
    };
    let left = bumps(rng);
    let right = bumps(rng);
    let sum = |b: &[(f64, f64, f64)], r: f64| -> f64 {
        b.iter().map(|(c, w, a)| a * (-((r - c) / w).powi(2)).exp()).sum()
    };
    let l0 = sum(&left, 0.0);
    let r0 = sum(&right, 0.0);
    let decay = rng.gen_range(0.5..2.0);
    PiecewiseField::from_fn(
        grid,
        |x| sum(&left, -x),
        |x| (tau * l0 - r0) * (-decay * x).exp() + sum(&right, x),
    )
}
