//! Renewal laws, disorder laws and the analytic quantities derived from them.

mod disorder;
mod mass;
mod renewal;

pub use disorder::{hc_bounds, mgf, DisorderKind, DisorderLaw};
pub use mass::{renewal_mass_function, RenewalMassFunction};
pub use renewal::{build_renewal_law, SlowlyVarying, TailShape, TailedRenewalLaw};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coupling strength `lambda` and charge bias `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub lambda: f64,
    pub h: f64,
}

impl CouplingParams {
    pub fn new(lambda: f64, h: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::param("lambda", format!("must be finite and >= 0, got {lambda}")));
        }
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::param("h", format!("must be finite and >= 0, got {h}")));
        }
        Ok(Self { lambda, h })
    }

    /// `(a·λ, a·h)`, the weak-coupling rescaling.
    pub fn scaled(&self, a: f64) -> Self {
        Self {
            lambda: a * self.lambda,
            h: a * self.h,
        }
    }
}
