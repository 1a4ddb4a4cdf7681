//! Gauss–Legendre rules and the `(1 − t²)^p` integrals that appear in every
//! norm of a stationary state.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const PANEL_POINTS: usize = 20;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

/// Composite 20-point Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = panel_rule();
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + half * xi);
        }
        sum += half * s;
    }
    sum
}

/// Composite Gauss–Legendre, doubling the panel count from `initial_panels`
/// until two successive values agree to `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, initial_panels: usize, rel_tol: f64) -> f64 {
    let mut panels = initial_panels.max(1);
    let mut prev = composite(&f, a, b, panels);
    for _ in 0..20 {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(1e-300) {
            return next;
        }
        prev = next;
    }
    prev
}

/// `sech(s)^k` without overflow for large `|s|`.
pub(crate) fn sech_pow(s: f64, k: f64) -> f64 {
    let a = s.abs();
    (-k * (a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2)).exp()
}

/// `∫_a^b (1 − t²)^p dt` for `p > −1` and `a, b ∈ [−1, 1]`.
///
/// Evaluated in the variable `t = tanh s`, where the integrand becomes
/// `sech(s)^{2p+2}`: smooth, with no endpoint singularity even when `p < 0`.
/// Endpoints at `±1` map to `±∞` and are cut where the integrand is below
/// 1e-20.
pub fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    assert!(p > -1.0, "exponent must exceed -1, got {p}");
    assert!(
        (-1.0..=1.0).contains(&a) && (-1.0..=1.0).contains(&b),
        "limits must lie in [-1, 1]"
    );
    if a == b {
        return 0.0;
    }
    if a > b {
        return -power_integral(b, a, p);
    }
    let k = 2.0 * p + 2.0;
    let cutoff = std::f64::consts::LN_2 + 20.0 * std::f64::consts::LN_10 / k;
    let to_s = |t: f64| -> f64 {
        if t <= -1.0 {
            -cutoff
        } else if t >= 1.0 {
            cutoff
        } else {
            t.atanh().clamp(-cutoff, cutoff)
        }
    };
    let (sa, sb) = (to_s(a), to_s(b));
    if sa >= sb {
        return 0.0;
    }
    let scale = f64::max(1.0, 1.0 / k);
    let panels = ((sb - sa) / scale).ceil().max(1.0) as usize;
    integrate(|s| sech_pow(s, k), sa, sb, panels, 1e-14)
}

/// `∫_{−1}^{1} (1 − t²)^p dt`.
pub fn full_power_integral(p: f64) -> f64 {
    power_integral(-1.0, 1.0, p)
}
