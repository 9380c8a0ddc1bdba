//! Profiles across the layer, written in the scaled normal coordinate
//! `s ∈ [-1, 0]` (side 1) or `s ∈ [0, 1]` (side 2).

use serde::{Deserialize, Serialize};

use super::TwoRegionModeSolution;
use crate::error::{Error, Result};
use crate::geometry::{LayerSplit, Side};
use crate::materials::MaterialParams;

/// Affine profile `intercept + slope·s` on one side of the layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerProfile {
    pub side: Side,
    pub intercept: f64,
    pub slope: f64,
}

impl LayerProfile {
    pub fn zero(side: Side) -> Self {
        Self {
            side,
            intercept: 0.0,
            slope: 0.0,
        }
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.side.coordinate_range();
        if !(lo..=hi).contains(&s) {
            return Err(Error::CoordinateOutOfRange {
                s,
                range: match self.side {
                    Side::Inner => "[-1, 0]",
                    Side::Outer => "[0, 1]",
                },
            });
        }
        Ok(self.intercept + self.slope * s)
    }

    /// `∂_s` of the profile (constant).
    pub fn derivative(&self) -> f64 {
        self.slope
    }
}

/// Order-0 layer profile: the common trace `u_{0|Γ}`, constant in `s`.
pub fn layer_profile_order0(side: Side, u0: &TwoRegionModeSolution) -> LayerProfile {
    let trace = match side {
        Side::Inner => u0.inner_trace(),
        Side::Outer => u0.outer_trace(),
    };
    LayerProfile {
        side,
        intercept: trace,
        slope: 0.0,
    }
}

/// Order-1 layer profile obtained by integrating the flux relations in `s`:
///
/// ```text
/// side 1: u_{i,1|Γ} + p1·[(s+1)·α_i/α_δ - 1]·∂_n u_{i,0|Γ}
/// side 2: u_{e,1|Γ} + p2·[(s-1)·α_e/α_δ + 1]·∂_n u_{e,0|Γ}
/// ```
pub fn layer_profile_order1(
    side: Side,
    params: &MaterialParams,
    split: LayerSplit,
    u0: &TwoRegionModeSolution,
    u1: &TwoRegionModeSolution,
) -> LayerProfile {
    match side {
        Side::Inner => {
            let ratio = params.alpha_i / params.alpha_delta;
            let dn = u0.inner_normal_derivative();
            LayerProfile {
                side,
                intercept: u1.inner_trace() + split.p1() * (ratio - 1.0) * dn,
                slope: split.p1() * ratio * dn,
            }
        }
        Side::Outer => {
            let ratio = params.alpha_e / params.alpha_delta;
            let dn = u0.outer_normal_derivative();
            LayerProfile {
                side,
                intercept: u1.outer_trace() + split.p2() * (1.0 - ratio) * dn,
                slope: split.p2() * ratio * dn,
            }
        }
    }
}

/// Layer profile expressed in the radius: `intercept + slope·s` with
/// `s = (r - R)/(p_β·δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerFunction {
    pub side: Side,
    /// Interface radius `R`.
    pub r: f64,
    /// Sub-layer thickness `p_β·δ`.
    pub thickness: f64,
    pub intercept: f64,
    pub slope: f64,
}

impl LayerFunction {
    /// `Σ_j δ^j · profiles[j]`, the truncated expansion on one side.
    pub fn from_expansion(
        side: Side,
        r: f64,
        split: LayerSplit,
        delta: f64,
        profiles: &[LayerProfile],
    ) -> Self {
        let mut intercept = 0.0;
        let mut slope = 0.0;
        let mut weight = 1.0;
        for p in profiles {
            debug_assert_eq!(p.side, side);
            intercept += weight * p.intercept;
            slope += weight * p.slope;
            weight *= delta;
        }
        Self {
            side,
            r,
            thickness: split.fraction(side) * delta,
            intercept,
            slope,
        }
    }

    pub fn s_of(&self, r: f64) -> f64 {
        (r - self.r) / self.thickness
    }

    pub fn value(&self, r: f64) -> f64 {
        self.intercept + self.slope * self.s_of(r)
    }

    pub fn derivative(&self, _r: f64) -> f64 {
        self.slope / self.thickness
    }

    pub fn value_and_derivative(&self, r: f64) -> (f64, f64) {
        (self.value(r), self.derivative(r))
    }

    /// Sub-layer radial interval.
    pub fn interval(&self) -> (f64, f64) {
        match self.side {
            Side::Inner => (self.r - self.thickness, self.r),
            Side::Outer => (self.r, self.r + self.thickness),
        }
    }
}
