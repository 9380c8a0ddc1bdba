//! Conductivities of the three materials and the scalar coefficients they
//! induce in the first-order transmission conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LayerSplit;

/// Relative guard used to reject `alpha_delta` values that coincide with one
/// of the bulk conductivities (the split then degenerates to 0 or 1).
pub const ORDERING_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub alpha_i: f64,
    pub alpha_delta: f64,
    pub alpha_e: f64,
}

impl MaterialParams {
    pub fn new(alpha_i: f64, alpha_delta: f64, alpha_e: f64) -> Result<Self> {
        let params = Self {
            alpha_i,
            alpha_delta,
            alpha_e,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same conductivity everywhere.
    pub fn uniform(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha_i", self.alpha_i),
            ("alpha_delta", self.alpha_delta),
            ("alpha_e", self.alpha_e),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidMaterials(format!(
                    "{name} must be a strictly positive finite number, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Strict ordering `alpha_i < alpha_delta < alpha_e` (or reversed), with
    /// both gaps larger than [`ORDERING_GUARD`] relative to the largest value.
    pub fn is_mid_diffusion(&self) -> bool {
        let scale = self.alpha_i.max(self.alpha_delta).max(self.alpha_e);
        let guard = ORDERING_GUARD * scale;
        let (lo, hi) = if self.alpha_i < self.alpha_e {
            (self.alpha_i, self.alpha_e)
        } else {
            (self.alpha_e, self.alpha_i)
        };
        self.alpha_delta - lo > guard && hi - self.alpha_delta > guard
    }

    pub fn require_mid_diffusion(&self) -> Result<()> {
        if self.is_mid_diffusion() {
            Ok(())
        } else {
            Err(Error::NotMidDiffusion {
                alpha_i: self.alpha_i,
                alpha_delta: self.alpha_delta,
                alpha_e: self.alpha_e,
            })
        }
    }

    /// `(alpha_e - alpha_delta)(alpha_i - alpha_delta) / alpha_delta`, the
    /// coefficient of the surface Laplacian in the reduced flux condition.
    /// Negative whenever the ordering is mid-diffusion.
    pub fn kappa(&self) -> f64 {
        (self.alpha_e - self.alpha_delta) * (self.alpha_i - self.alpha_delta) / self.alpha_delta
    }

    /// Coefficient multiplying the interior normal derivative in the trace
    /// jump `u_i,1 - u_e,1` on the interface.
    pub fn trace_jump_coefficient(&self, split: LayerSplit) -> f64 {
        let ratio = self.alpha_i / self.alpha_delta;
        split.p1() * (1.0 - ratio) + split.p2() * (self.alpha_i / self.alpha_e - ratio)
    }

    /// Coefficient multiplying the surface Laplacian of the interior trace in
    /// the flux jump `alpha_i ∂_n u_i,1 - alpha_e ∂_n u_e,1`.
    pub fn flux_jump_coefficient(&self, split: LayerSplit) -> f64 {
        split.p1() * (self.alpha_delta - self.alpha_i)
            + split.p2() * (self.alpha_delta - self.alpha_e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(MaterialParams::new(0.0, 1.0, 2.0).is_err());
        assert!(MaterialParams::new(1.0, -1.0, 2.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn ordering() {
        assert!(MaterialParams::new(1.0, 2.0, 4.0)
            .unwrap()
            .is_mid_diffusion());
        assert!(MaterialParams::new(4.0, 2.0, 1.0)
            .unwrap()
            .is_mid_diffusion());
        assert!(!MaterialParams::new(1.0, 2.0, 1.5)
            .unwrap()
            .is_mid_diffusion());
        assert!(!MaterialParams::uniform(1.0).unwrap().is_mid_diffusion());
        // inside the relative guard
        assert!(!MaterialParams::new(1.0, 1.0 + 1e-14, 4.0)
            .unwrap()
            .is_mid_diffusion());
    }

    #[test]
    fn kappa_default() {
        let m = MaterialParams::new(1.0, 2.0, 4.0).unwrap();
        assert_eq!(m.kappa(), -1.0);
    }
}
