//! Stationary states, ground states and orbital stability for the focusing
//! nonlinear Schrödinger equation on the line with a Fülöp-Tsutsui point
//! defect at the origin,
//!
//! ```text
//! i∂ₜu = −u″ − |u|^{2μ}u,   u(0⁺) = τu(0⁻),   u′(0⁻) − τu′(0⁺) = v·u(0⁻).
//! ```
//!
//! Every stationary state is a pair of translated soliton pieces glued at the
//! defect. [`closedform`] gives them explicitly, [`functionals`] evaluates the
//! action and Nehari functional, [`groundstate`] picks the minimizer,
//! [`spectral`] and [`stability`] check the orbital-stability criterion and
//! [`dynamics`] runs the flow.
//!
//! ```
//! use nehari_ft::{branch_tilde, closed_form_report, DefectParams};
//!
//! let p = DefectParams::new(2.0, 1.0, 1.0, 1.0)?;
//! let ground = branch_tilde(&p)?;
//! let r = closed_form_report(&ground);
//! assert!((r.mass2 - 2.20072).abs() < 1e-5);
//! # Ok::<(), nehari_ft::Error>(())
//! ```

pub mod closedform;
pub mod discrete;
pub mod dynamics;
mod error;
pub mod functionals;
pub mod grid;
pub mod groundstate;
pub mod linalg;
mod params;
pub mod quadrature;
pub mod spectral;
pub mod stability;

pub use closedform::{
    branch_hat, branch_tilde, branches, build_stationary, dipole_state, regime, BranchLabel,
    ExistenceRegime, StationaryBranch,
};
pub use dynamics::{evolve, perturb, EvolutionConfig, TrajectoryReport};
pub use error::{Error, Result};
pub use functionals::{closed_form_report, evaluate, project_to_nehari, FunctionalReport};
pub use grid::{HalfLineGrid, PiecewiseField};
pub use groundstate::{identify, variational_minimize, GroundStateResult, Winner};
pub use params::DefectParams;
pub use spectral::{build_operator, spectral_report, OperatorKind, SpectralReport};
pub use stability::{gss_verdict, StabilityVerdict, Verdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/stationary-states.md")]
    struct StationaryStates;
    #[doc = include_str!("../../../book/src/ground-states.md")]
    struct GroundStates;
    #[doc = include_str!("../../../book/src/stability.md")]
    struct Stability;
    #[doc = include_str!("../../../book/src/dynamics.md")]
    struct Dynamics;
}
