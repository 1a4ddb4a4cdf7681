//! Problem parameters.

use serde::Serialize;

use crate::error::{Error, Result};

/// One problem instance: jump factor `tau`, defect strength `v`,
/// nonlinearity power `mu` and frequency `omega`.
///
/// Only `tau > 0`, `tau != 1` is accepted. Negative jump factors are
/// equivalent to positive ones up to a sign flip of the right half-line and
/// are rejected rather than silently mapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefectParams {
    tau: f64,
    v: f64,
    mu: f64,
    omega: f64,
}

impl DefectParams {
    pub fn new(tau: f64, v: f64, mu: f64, omega: f64) -> Result<Self> {
        check_tau(tau)?;
        check_positive("v", v, "only attractive defects (v > 0) are supported")?;
        check_positive("mu", mu, "the nonlinearity power must be positive")?;
        check_positive("omega", omega, "the frequency must be positive")?;
        Ok(Self { tau, v, mu, omega })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Same defect, different frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.tau, self.v, self.mu, omega)
    }

    /// `v² / (τ² + 1)²`: energy of the linear bound state, below which no
    /// stationary state exists.
    pub fn omega_star(&self) -> f64 {
        let s = self.tau * self.tau + 1.0;
        self.v * self.v / (s * s)
    }

    /// `v² / (τ² − 1)²`: above it a second branch appears.
    pub fn omega_dstar(&self) -> f64 {
        let d = self.tau * self.tau - 1.0;
        self.v * self.v / (d * d)
    }

    pub fn sqrt_omega(&self) -> f64 {
        self.omega.sqrt()
    }
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "the jump factor must be positive",
        });
    }
    if tau == 1.0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "tau = 1 is the continuous delta case, not a jump defect",
        });
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
