//! Finite-element realization of the defect Laplacian shared by the
//! variational solver, the linearized operators and the time stepper.
//!
//! Unknowns are the nodal values of a continuous piecewise-linear function
//! on each half-line, with homogeneous Dirichlet values at `±L`. The `0⁺`
//! value is not an unknown: it is `τ` times the `0⁻` value, so the jump
//! condition holds exactly and the flux condition
//! `u′(0⁻) − τu′(0⁺) = v·u(0⁻)` comes out as the natural boundary condition
//! of the quadratic form `‖u′‖² − v|u(0⁻)|²`.
//!
//! Packed layout (length `2N − 1`): left nodes `1..=N` (the last one is
//! `0⁻`), then right nodes `1..N`.

use num_complex::Complex64;

use crate::grid::{HalfLineGrid, PiecewiseField};
use crate::linalg::SymTridiagonal;
use crate::params::DefectParams;

#[derive(Debug, Clone)]
pub struct DiscreteModel {
    grid: HalfLineGrid,
    tau: f64,
    v: f64,
    mu: f64,
    mass: Vec<f64>,
    lp_weight: Vec<f64>,
    kinetic: SymTridiagonal,
}

impl DiscreteModel {
    pub fn new(grid: HalfLineGrid, p: &DefectParams) -> Self {
        let n = grid.n();
        let h = grid.spacing();
        let tau = p.tau();
        let size = 2 * n - 1;
        let iface = n - 1;

        let mut mass = vec![h; size];
        mass[iface] = 0.5 * h * (1.0 + tau * tau);
        let mut lp_weight = vec![h; size];
        lp_weight[iface] = 0.5 * h * (1.0 + tau.powf(2.0 * p.mu() + 2.0));

        let mut k = SymTridiagonal::zeros(size);
        let inv_h = 1.0 / h;
        // left: segments (j, j+1) for j = 0..N, node 0 is the Dirichlet end
        for j in 0..n {
            let b = j; // packed index of left node j+1
            k.diag[b] += inv_h;
            if j > 0 {
                k.diag[b - 1] += inv_h;
                k.off[b - 1] -= inv_h;
            }
        }
        // right: segment (0⁺, 1) couples to the interface unknown through τ
        k.diag[iface] += tau * tau * inv_h;
        k.diag[iface + 1] += inv_h;
        k.off[iface] -= tau * inv_h;
        // segments (k, k+1) for k = 1..N, node N is the Dirichlet end
        for r in 1..n {
            let a = iface + r;
            k.diag[a] += inv_h;
            if r + 1 < n {
                k.diag[a + 1] += inv_h;
                k.off[a] -= inv_h;
            }
        }

        Self {
            grid,
            tau,
            v: p.v(),
            mu: p.mu(),
            mass,
            lp_weight,
            kinetic: k,
        }
    }

    pub fn grid(&self) -> &HalfLineGrid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.mass.len()
    }

    /// Packed index of the `0⁻` node.
    pub fn interface(&self) -> usize {
        self.grid.n() - 1
    }

    /// Lumped (trapezoid) mass weights.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Trapezoid weights for `|u|^{2μ+2}`; the interface weight absorbs
    /// `|u(0⁺)|^{2μ+2} = τ^{2μ+2}|u(0⁻)|^{2μ+2}`.
    pub fn lp_weight(&self) -> &[f64] {
        &self.lp_weight
    }

    /// Stiffness matrix of `‖u′‖²`.
    pub fn kinetic(&self) -> &SymTridiagonal {
        &self.kinetic
    }

    /// `K − v e e^T`: the defect Laplacian in weak form.
    pub fn defect_laplacian(&self) -> SymTridiagonal {
        let mut k = self.kinetic.clone();
        k.diag[self.interface()] -= self.v;
        k
    }

    /// `K − v e e^T + ω M`.
    pub fn quadratic_matrix(&self, omega: f64) -> SymTridiagonal {
        let shift: Vec<f64> = self.mass.iter().map(|m| omega * m).collect();
        self.defect_laplacian().plus_diagonal(&shift)
    }

    /// Gram matrix of the `H¹τ` inner product, `K + M`.
    pub fn gram(&self) -> SymTridiagonal {
        self.kinetic.plus_diagonal(&self.mass)
    }

    pub fn pack(&self, u: &PiecewiseField) -> Vec<Complex64> {
        let n = self.grid.n();
        let mut z = Vec::with_capacity(self.size());
        z.extend_from_slice(&u.minus()[1..=n]);
        z.extend_from_slice(&u.plus()[1..n]);
        z
    }

    pub fn pack_real(&self, u: &PiecewiseField) -> Vec<f64> {
        self.pack(u).into_iter().map(|c| c.re).collect()
    }

    pub fn unpack(&self, z: &[Complex64]) -> PiecewiseField {
        let n = self.grid.n();
        let zero = Complex64::new(0.0, 0.0);
        let mut minus = Vec::with_capacity(n + 1);
        minus.push(zero);
        minus.extend_from_slice(&z[..n]);
        let mut plus = Vec::with_capacity(n + 1);
        plus.push(z[n - 1] * self.tau);
        plus.extend_from_slice(&z[n..]);
        plus.push(zero);
        PiecewiseField::from_values(self.grid, minus, plus).expect("sizes match by construction")
    }

    pub fn unpack_real(&self, z: &[f64]) -> PiecewiseField {
        let c: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.unpack(&c)
    }

    pub fn mass_of(&self, z: &[Complex64]) -> f64 {
        self.mass.iter().zip(z).map(|(m, z)| m * z.norm_sqr()).sum()
    }

    pub fn lp_of(&self, z: &[Complex64]) -> f64 {
        let power = self.mu + 1.0;
        self.lp_weight
            .iter()
            .zip(z)
            .map(|(w, z)| w * z.norm_sqr().powf(power))
            .sum()
    }

    /// `z^* A z` for a real symmetric tridiagonal `A`.
    pub fn form(a: &SymTridiagonal, z: &[Complex64]) -> f64 {
        let mut s = 0.0;
        for i in 0..z.len() {
            s += a.diag[i] * z[i].norm_sqr();
            if i + 1 < z.len() {
                s += 2.0 * a.off[i] * (z[i].conj() * z[i + 1]).re;
            }
        }
        s
    }

    /// Discrete energy `½(z^*Kz − v|z₀|²) − Σ w|z|^{2μ+2} / (2μ+2)`.
    pub fn energy_of(&self, z: &[Complex64]) -> f64 {
        let quad = Self::form(&self.kinetic, z) - self.v * z[self.interface()].norm_sqr();
        0.5 * quad - self.lp_of(z) / (2.0 * self.mu + 2.0)
    }

    /// `⟨a, b⟩` in the discrete `H¹τ` inner product (conjugate-linear in `a`).
    pub fn h1_inner(&self, gram: &SymTridiagonal, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..a.len() {
            s += a[i].conj() * b[i] * gram.diag[i];
            if i + 1 < a.len() {
                s += (a[i].conj() * b[i + 1] + a[i + 1].conj() * b[i]) * gram.off[i];
            }
        }
        s
    }

    /// Diagonal `w_j |U_j|^{2μ}` of the potential term around a state `U`.
    pub fn potential_weights(&self, z: &[f64]) -> Vec<f64> {
        let two_mu = 2.0 * self.mu;
        self.lp_weight
            .iter()
            .zip(z)
            .map(|(w, u)| w * u.abs().powf(two_mu))
            .collect()
    }
}
