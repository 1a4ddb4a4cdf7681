//! Tridiagonal kernels: solves, products, and a Sturm-sequence eigensolver
//! for symmetric tridiagonal matrices.

use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i] = A[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, x)| d * x).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        x.iter().zip(self.mul_vec(x)).map(|(a, b)| a * b).sum()
    }

    /// `self + diag(d)`
    pub fn plus_diagonal(&self, d: &[f64]) -> Self {
        Self {
            diag: self.diag.iter().zip(d).map(|(a, b)| a + b).collect(),
            off: self.off.clone(),
        }
    }

    /// `D A D` for diagonal `D`.
    pub fn congruence(&self, d: &[f64]) -> Self {
        Self {
            diag: self.diag.iter().zip(d).map(|(a, s)| a * s * s).collect(),
            off: self
                .off
                .iter()
                .enumerate()
                .map(|(i, o)| o * d[i] * d[i + 1])
                .collect(),
        }
    }

    /// Solve `A x = b` without pivoting (for positive definite or diagonally
    /// dominant `A`).
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        thomas(&self.off, &self.diag, &self.off, &mut x)?;
        Ok(x)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi || hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest `count` eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len())).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for an (accurately known) eigenvalue, by inverse
    /// iteration with a partially pivoted factorization.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let scale = self.gershgorin().1.abs().max(1.0);
        let shift = lambda + 8.0 * f64::EPSILON * scale;
        let diag: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i * 7919) % 13) as f64 / 13.0).collect();
        normalize(&mut x);
        const ITERATIONS: usize = 50;
        for _ in 0..ITERATIONS {
            let mut y = x.clone();
            pivoted_solve(&self.off, &diag, &self.off, &mut y)?;
            normalize(&mut y);
            if y.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
            let change = y
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            x = y;
            if change < 1e-13 {
                return Ok(x);
            }
        }
        let residual = {
            let ax = self.mul_vec(&x);
            ax.iter()
                .zip(&x)
                .map(|(a, v)| (a - lambda * v).abs())
                .fold(0.0, f64::max)
        };
        if residual < 1e-8 * scale {
            Ok(x)
        } else {
            Err(Error::EigenNonConvergence {
                iterations: ITERATIONS,
            })
        }
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Thomas algorithm for a general tridiagonal system, in place on `rhs`.
/// `lower[i] = A[i+1][i]`, `upper[i] = A[i][i+1]`.
pub fn thomas<T>(lower: &[T], diag: &[T], upper: &[T], rhs: &mut [T]) -> Result<()>
where
    T: Copy
        + PartialEq
        + Default
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>,
{
    let n = diag.len();
    if rhs.len() != n || lower.len() + 1 != n || upper.len() + 1 != n {
        return Err(Error::LinearSolve("dimension mismatch".into()));
    }
    let zero = T::default();
    let mut c = vec![zero; n];
    let mut denom = diag[0];
    if denom == zero {
        return Err(Error::LinearSolve("zero pivot in row 0".into()));
    }
    rhs[0] = rhs[0] / denom;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / denom;
        denom = diag[i] - lower[i - 1] * c[i - 1];
        if denom == zero {
            return Err(Error::LinearSolve(format!("zero pivot in row {i}")));
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] = rhs[i] - c[i] * next;
    }
    Ok(())
}

/// Gaussian elimination with partial pivoting for a real tridiagonal
/// system, in place on `b`. Exact zero pivots are nudged so that shifted
/// (nearly singular) systems still produce a usable direction.
pub fn pivoted_solve(lower: &[f64], diag: &[f64], upper: &[f64], b: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if b.len() != n || lower.len() + 1 != n || upper.len() + 1 != n {
        return Err(Error::LinearSolve("dimension mismatch".into()));
    }
    let mut d = diag.to_vec();
    let mut du = upper.to_vec();
    let mut dl = lower.to_vec();
    // second superdiagonal fill-in
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let tiny = f64::EPSILON * d.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            if i + 2 < n {
                du2[i] = 0.0;
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
        dl[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    if b.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::LinearSolve("non-finite solution".into()))
    }
}
