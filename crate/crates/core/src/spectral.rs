//! Linearization around the ground state.
//!
//! For a real stationary state `U`,
//!
//! ```text
//! L₁a = −a″ + ωa − (2μ+1)|U|^{2μ}a
//! L₂b = −b″ + ωb − |U|^{2μ}b
//! ```
//!
//! on the domain carrying both interface conditions. Both are discretized in
//! weak form on the [`DiscreteModel`] space, which gives a symmetric pencil
//! `(A, M)` with `M` the lumped mass. The pencil is reduced to the symmetric
//! tridiagonal `M^{-1/2} A M^{-1/2}`, whose Sturm sequence counts
//! eigenvalues exactly.

use serde::Serialize;

use crate::closedform::{branch_tilde, build_stationary, StationaryBranch};
use crate::discrete::DiscreteModel;
use crate::error::{Error, Result};
use crate::grid::HalfLineGrid;
use crate::linalg::SymTridiagonal;
use crate::params::DefectParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorKind {
    L1,
    L2,
}

impl OperatorKind {
    fn potential_factor(&self, mu: f64) -> f64 {
        match self {
            OperatorKind::L1 => 2.0 * mu + 1.0,
            OperatorKind::L2 => 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::L1 => "L1",
            OperatorKind::L2 => "L2",
        }
    }
}

/// A discretized linearization operator around the tilde ground state.
#[derive(Debug, Clone)]
pub struct LinearizedOperator {
    kind: OperatorKind,
    params: DefectParams,
    model: DiscreteModel,
    /// Weak form `A`.
    weak: SymTridiagonal,
    /// `M^{-1/2} A M^{-1/2}`.
    reduced: SymTridiagonal,
    /// Packed samples of the ground state.
    state: Vec<f64>,
}

/// Largest admissible `h·μ√ω` (grid points per soliton width).
const MAX_RESOLUTION: f64 = 0.25;

pub fn build_operator(
    kind: OperatorKind,
    p: &DefectParams,
    grid: HalfLineGrid,
) -> Result<LinearizedOperator> {
    let branch = branch_tilde(p)?;
    build_operator_around(kind, &branch, grid)
}

/// Same as [`build_operator`] but around an explicit branch.
pub fn build_operator_around(
    kind: OperatorKind,
    branch: &StationaryBranch,
    grid: HalfLineGrid,
) -> Result<LinearizedOperator> {
    let p = *branch.params();
    let resolution = grid.spacing() * p.mu().max(1.0) * p.sqrt_omega();
    if resolution > MAX_RESOLUTION {
        return Err(Error::InvalidGrid(format!(
            "spacing {} does not resolve the ground state (h·max(μ,1)·√ω = {resolution:.3} > {MAX_RESOLUTION})",
            grid.spacing()
        )));
    }
    let u = build_stationary(branch, grid)?;
    let model = DiscreteModel::new(grid, &p);
    let state = model.pack_real(&u);
    let c = kind.potential_factor(p.mu());
    let potential: Vec<f64> = model
        .potential_weights(&state)
        .iter()
        .map(|w| -c * w)
        .collect();
    let weak = model
        .quadratic_matrix(p.omega())
        .plus_diagonal(&potential);
    let inv_sqrt_mass: Vec<f64> = model.mass().iter().map(|m| 1.0 / m.sqrt()).collect();
    let reduced = weak.congruence(&inv_sqrt_mass);
    Ok(LinearizedOperator {
        kind,
        params: p,
        model,
        weak,
        reduced,
        state,
    })
}

impl LinearizedOperator {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn params(&self) -> &DefectParams {
        &self.params
    }

    pub fn model(&self) -> &DiscreteModel {
        &self.model
    }

    /// Packed samples of the state the operator linearizes around.
    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn weak_form(&self) -> &SymTridiagonal {
        &self.weak
    }

    pub fn reduced(&self) -> &SymTridiagonal {
        &self.reduced
    }

    /// Strong-form action `M^{-1} A a` on a packed vector.
    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        self.weak
            .mul_vec(a)
            .into_iter()
            .zip(self.model.mass())
            .map(|(y, m)| y / m)
            .collect()
    }

    /// `(L a, a)` through the weak form.
    pub fn quadratic_form(&self, a: &[f64]) -> f64 {
        self.weak.quadratic_form(a)
    }

    /// Eigenvalue threshold below which a value counts as zero: `10·h²·ω`.
    pub fn zero_tolerance(&self) -> f64 {
        let h = self.model.grid().spacing();
        10.0 * h * h * self.params.omega()
    }

    /// Eigenvector of the pencil for eigenvalue `lambda`, packed, normalized
    /// in the lumped `L²` inner product.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let y = self.reduced.eigenvector(lambda)?;
        Ok(y.iter()
            .zip(self.model.mass())
            .map(|(y, m)| y / m.sqrt())
            .collect())
    }
}

/// Eigenvalue summary of a linearized operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub kind: OperatorKind,
    /// Eigenvalues below `-zero_tol`.
    pub n_negative: usize,
    /// Eigenvalues within `zero_tol` of zero.
    pub n_kernel: usize,
    pub lambda_min: f64,
    /// Computed eigenvalue closest to zero.
    pub lambda_kernel: f64,
    /// Sine of the angle between the eigenvector of `lambda_kernel` and the
    /// ground state, in the `L²` inner product.
    pub kernel_vector_residual: f64,
    pub zero_tol: f64,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

impl SpectralReport {
    /// The Grillakis–Shatah–Strauss shape: for `L₂` no negative eigenvalue and
    /// a one-dimensional kernel; for `L₁` one negative eigenvalue and no kernel.
    pub fn meets_gss(&self) -> bool {
        match self.kind {
            OperatorKind::L2 => self.n_negative == 0 && self.n_kernel == 1,
            OperatorKind::L1 => self.n_negative == 1 && self.n_kernel == 0,
        }
    }
}

pub const REPORTED_EIGENVALUES: usize = 10;

pub fn spectral_report(op: &LinearizedOperator) -> Result<SpectralReport> {
    let tol = op.zero_tolerance();
    let a = op.reduced();
    let n_negative = a.count_below(-tol);
    let n_kernel = a.count_below(tol) - n_negative;
    let eigenvalues = a.lowest_eigenvalues(REPORTED_EIGENVALUES);
    let lambda_kernel = eigenvalues
        .iter()
        .copied()
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
        .unwrap_or(f64::NAN);
    let vector = op.eigenvector(lambda_kernel)?;
    let kernel_vector_residual = sine_of_angle(op.model().mass(), &vector, op.state());
    Ok(SpectralReport {
        kind: op.kind(),
        n_negative,
        n_kernel,
        lambda_min: eigenvalues[0],
        lambda_kernel,
        kernel_vector_residual,
        zero_tol: tol,
        eigenvalues,
    })
}

/// `sin∠(a, b)` in the weighted inner product `Σ w a b`.
pub fn sine_of_angle(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let dot = |x: &[f64], y: &[f64]| -> f64 { w.iter().zip(x).zip(y).map(|((w, x), y)| w * x * y).sum() };
    let ab = dot(a, b);
    let cos2 = ab * ab / (dot(a, a) * dot(b, b));
    (1.0 - cos2).max(0.0).sqrt()
}

/// `(τ^{2μ} − 1) / (τ^{2μ}(1 − τ^{2μ+4}))`, the value `T̃₋²` would need for
/// `L₁` to have a kernel. It is negative for every admissible `τ`.
pub fn kernel_obstruction_check(p: &DefectParams) -> f64 {
    kernel_obstruction(p.tau(), p.mu())
}

pub fn kernel_obstruction(tau: f64, mu: f64) -> f64 {
    let ln_tau = tau.ln();
    let e = (2.0 * mu * ln_tau).exp_m1();
    let d = ((2.0 * mu + 4.0) * ln_tau).exp_m1();
    e / ((e + 1.0) * -d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anchor() -> DefectParams {
        DefectParams::new(2.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn obstruction_values() {
        let p = anchor();
        assert!((kernel_obstruction_check(&p) + 1.0 / 84.0).abs() < 1e-15);
        let q = DefectParams::new(0.5, 1.0, 1.0, 1.0).unwrap();
        let expect = -0.75 / (0.25 * (1.0 - 0.5f64.powi(6)));
        assert!((kernel_obstruction_check(&q) - expect).abs() < 1e-14);
        let near = kernel_obstruction(1.0 + 1e-9, 1.0);
        assert!(near < 0.0 && near > -1.0);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = anchor();
        let err = build_operator(OperatorKind::L2, &p, HalfLineGrid::new(40.0, 100).unwrap()).unwrap_err();
        assert_eq!(err.kind(), "invalid-grid");
    }

    #[test]
    fn l1_form_on_the_ground_state() {
        let p = anchor();
        let g = HalfLineGrid::new(40.0, 4000).unwrap();
        let op = build_operator(OperatorKind::L1, &p, g).unwrap();
        let u = op.state().to_vec();
        let lp = op.model().lp_weight().iter().zip(&u).map(|(w, u)| w * u.powi(4)).sum::<f64>();
        let form = op.quadratic_form(&u);
        assert!(form < 0.0);
        assert!((form + 2.0 * lp).abs() < 1e-3 * lp, "{form} {lp}");
    }
}
