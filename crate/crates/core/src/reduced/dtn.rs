use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircleGeometry, FourierMode};
use crate::materials::MaterialParams;

/// Relative threshold below which a boundary symbol counts as vanishing.
pub const RESONANCE_TOLERANCE: f64 = 1e-10;

/// Per-mode Dirichlet-to-Neumann multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtNSymbol {
    pub n: u32,
    pub value: f64,
}

/// Interior map `φ ↦ ∂_r u` for the harmonic extension into the disk: `n/R`.
pub fn dtn_interior(n: u32, r: f64) -> DtNSymbol {
    DtNSymbol {
        n,
        value: n as f64 / r,
    }
}

/// Exterior map `ψ ↦ -∂_r u` on `r = R` for the harmonic extension into the
/// annulus `R < r < R_ext` vanishing on the outer circle.
pub fn dtn_exterior(n: u32, r: f64, r_ext: f64) -> Result<DtNSymbol> {
    if !(r > 0.0 && r < r_ext) {
        return Err(Error::InvalidGeometry(format!(
            "need 0 < R < R_ext, got R = {r}, R_ext = {r_ext}"
        )));
    }
    let value = if n == 0 {
        1.0 / (r * (r_ext / r).ln())
    } else {
        // q = (R/R_ext)^n ≤ 1 keeps the closed form overflow-free
        let q2 = (r / r_ext).powi(2 * n as i32);
        n as f64 / r * (1.0 + q2) / (1.0 - q2)
    };
    Ok(DtNSymbol { n, value })
}

/// Per-mode multiplier of the reduced interface operator
/// `α_i S_i + α_e S_e - δκ Δ_Γ`, i.e. `α_i n/R + α_e s_e(n) + δκ n²/R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySymbol {
    pub mode: FourierMode,
    pub delta: f64,
    pub value: f64,
    /// `α_i n/R + α_e s_e(n)`, the scale the resonance test is relative to.
    pub scale: f64,
    pub resonant: bool,
}

impl BoundarySymbol {
    pub fn require_nonresonant(&self) -> Result<()> {
        if self.resonant {
            Err(Error::ResonantMode {
                mode: self.mode,
                delta: self.delta,
                lambda: self.value,
            })
        } else {
            Ok(())
        }
    }
}

pub fn boundary_symbol(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
) -> Result<BoundarySymbol> {
    params.require_mid_diffusion()?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "layer thickness must be nonnegative, got {delta}"
        )));
    }
    let (r, n) = (geometry.r(), mode.n);
    let scale = params.alpha_i * dtn_interior(n, r).value
        + params.alpha_e * dtn_exterior(n, r, geometry.r_ext())?.value;
    let nf = n as f64;
    let value = scale + delta * params.kappa() * nf * nf / (r * r);
    Ok(BoundarySymbol {
        mode,
        delta,
        value,
        scale,
        resonant: value.abs() < RESONANCE_TOLERANCE * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interior_examples() {
        assert_eq!(dtn_interior(0, 3.0).value, 0.0);
        assert_eq!(dtn_interior(3, 1.0).value, 3.0);
        assert_eq!(dtn_interior(2, 2.0).value, 1.0);
    }

    #[test]
    fn exterior_examples() {
        assert_relative_eq!(
            dtn_exterior(0, 1.0, std::f64::consts::E).unwrap().value,
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            dtn_exterior(2, 1.0, 2.0).unwrap().value,
            34.0 / 15.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            dtn_exterior(1, 1.0, 1e8).unwrap().value,
            1.0,
            max_relative = 1e-12
        );
        assert!(dtn_exterior(1, 2.0, 2.0).is_err());
    }

    #[test]
    fn exterior_matches_harmonic_extension() {
        // u = A (r/R_ext)^n + B (R/r)^n, u(R) = 1, u(R_ext) = 0
        for n in 1..6u32 {
            let (r, r_ext) = (0.7f64, 1.9f64);
            let q = (r / r_ext).powi(n as i32);
            let b = 1.0 / (1.0 - q * q);
            let a = -q * b;
            let nf = n as f64;
            let du = a * nf / r_ext * q / (r / r_ext) + b * (-nf / r);
            assert_relative_eq!(
                dtn_exterior(n, r, r_ext).unwrap().value,
                -du,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn exterior_positive_and_decreasing() {
        for n in 0..40u32 {
            let mut last = f64::INFINITY;
            for r_ext in [1.1, 1.5, 2.0, 4.0, 10.0] {
                let v = dtn_exterior(n, 1.0, r_ext).unwrap().value;
                assert!(v > 0.0 && v <= last);
                assert!(v >= n as f64);
                last = v;
            }
        }
    }

    #[test]
    fn boundary_symbol_examples() {
        let params = MaterialParams::new(1.0, 2.0, 4.0).unwrap();
        let g = CircleGeometry::new(1.0, 2.0).unwrap();
        let s = boundary_symbol(FourierMode::cos(2), 0.01, &params, &g).unwrap();
        assert_relative_eq!(
            s.value,
            2.0 + 4.0 * 34.0 / 15.0 - 0.04,
            max_relative = 1e-14
        );
        assert!((s.value - 11.0267).abs() < 1e-4);

        let s0 = boundary_symbol(FourierMode::cos(0), 0.1, &params, &g).unwrap();
        assert_relative_eq!(s0.value, 4.0 / 2f64.ln(), max_relative = 1e-14);
        assert!(!s0.resonant);

        for n in 1..30 {
            let s = boundary_symbol(FourierMode::cos(n), 0.0, &params, &g).unwrap();
            assert_eq!(s.value, s.scale);
            assert!(s.value > 0.0);
        }
        assert!(boundary_symbol(
            FourierMode::cos(1),
            0.1,
            &MaterialParams::uniform(1.0).unwrap(),
            &g
        )
        .is_err());
    }

    #[test]
    fn resonance_is_flagged() {
        // at δ = 0.1: n + 4·s_e(n) - 0.1·n² vanishes at n = 50 up to 2^-100
        let params = MaterialParams::new(1.0, 2.0, 4.0).unwrap();
        let g = CircleGeometry::new(1.0, 2.0).unwrap();
        let s = boundary_symbol(FourierMode::cos(50), 0.1, &params, &g).unwrap();
        assert!(s.resonant, "{s:?}");
        assert!(matches!(
            s.require_nonresonant(),
            Err(Error::ResonantMode { .. })
        ));
        assert!(
            !boundary_symbol(FourierMode::cos(49), 0.1, &params, &g)
                .unwrap()
                .resonant
        );
        assert!(
            !boundary_symbol(FourierMode::cos(51), 0.1, &params, &g)
                .unwrap()
                .resonant
        );
    }
}
