//! Concentric-circle geometry, Fourier-mode bookkeeping and the position of
//! the artificial interface inside the layer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::MaterialParams;

/// Default half-width of the band around 1/2 that a split is expected to stay
/// in: `p1, p2 ∈ [P_MIN, 1 - P_MIN]`.
pub const DEFAULT_P_MIN: f64 = 0.05;

/// Interface circle of radius `r` inside the outer boundary circle `r_ext`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleGeometry {
    r: f64,
    r_ext: f64,
}

impl CircleGeometry {
    pub fn new(r: f64, r_ext: f64) -> Result<Self> {
        if !(r.is_finite() && r_ext.is_finite() && r > 0.0 && r < r_ext) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 < R < R_ext, got R = {r}, R_ext = {r_ext}"
            )));
        }
        Ok(Self { r, r_ext })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn r_ext(&self) -> f64 {
        self.r_ext
    }

    /// Curvature of the interface.
    pub fn curvature(&self) -> f64 {
        1.0 / self.r
    }

    /// Checks that the layer of thickness `delta` fits strictly between the
    /// origin and the outer boundary, and returns its radii
    /// `(R - p1·δ, R + p2·δ)`.
    pub fn layer_bounds(&self, split: LayerSplit, delta: f64) -> Result<(f64, f64)> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "layer thickness must be positive, got {delta}"
            )));
        }
        let inner = self.r - split.p1() * delta;
        let outer = self.r + split.p2() * delta;
        if !(inner > 0.0 && outer < self.r_ext) {
            return Err(Error::InvalidGeometry(format!(
                "layer [{inner}, {outer}] does not fit inside (0, {})",
                self.r_ext
            )));
        }
        Ok((inner, outer))
    }
}

/// Fractions of the layer thickness on each side of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerSplit {
    p1: f64,
    p2: f64,
}

impl LayerSplit {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0) {
            return Err(Error::InvalidSplit(format!(
                "p1 and p2 must lie in (0, 1), got ({p1}, {p2})"
            )));
        }
        if ((p1 + p2) - 1.0).abs() > 4.0 * f64::EPSILON {
            return Err(Error::InvalidSplit(format!(
                "p1 + p2 must equal 1, got {}",
                p1 + p2
            )));
        }
        Ok(Self { p1, p2 })
    }

    pub fn from_p1(p1: f64) -> Result<Self> {
        Self::new(p1, 1.0 - p1)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn fraction(&self, side: Side) -> f64 {
        match side {
            Side::Inner => self.p1,
            Side::Outer => self.p2,
        }
    }

    /// Whether both fractions stay in `[p_min, 1 - p_min]`.
    pub fn in_band(&self, p_min: f64) -> bool {
        let hi = 1.0 - p_min;
        (p_min..=hi).contains(&self.p1) && (p_min..=hi).contains(&self.p2)
    }
}

/// The two sub-layers: `Inner` lies between `R - p1·δ` and `R`, `Outer`
/// between `R` and `R + p2·δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Inner,
    Outer,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Inner, Side::Outer];

    /// Closed range of the scaled normal coordinate on this side.
    pub fn coordinate_range(&self) -> (f64, f64) {
        match self {
            Side::Inner => (-1.0, 0.0),
            Side::Outer => (0.0, 1.0),
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    #[default]
    Cos,
    Sin,
}

/// Angular factor `cos(nθ)` or `sin(nθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourierMode {
    pub n: u32,
    #[serde(default)]
    pub parity: Parity,
}

impl FourierMode {
    pub fn new(n: u32, parity: Parity) -> Result<Self> {
        if n == 0 && parity == Parity::Sin {
            return Err(Error::InvalidMode("sine mode 0 is identically zero".into()));
        }
        Ok(Self { n, parity })
    }

    pub fn cos(n: u32) -> Self {
        Self {
            n,
            parity: Parity::Cos,
        }
    }

    pub fn sin(n: u32) -> Result<Self> {
        Self::new(n, Parity::Sin)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.n, self.parity).map(|_| ())
    }

    /// `∫_0^{2π} cos²(nθ) dθ` (or the sine analogue).
    pub fn angular_weight(&self) -> f64 {
        if self.n == 0 {
            2.0 * std::f64::consts::PI
        } else {
            std::f64::consts::PI
        }
    }

    pub fn angular(&self, theta: f64) -> f64 {
        let arg = self.n as f64 * theta;
        match self.parity {
            Parity::Cos => arg.cos(),
            Parity::Sin => arg.sin(),
        }
    }
}

impl fmt::Display for FourierMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Cos => write!(f, "cos{}", self.n),
            Parity::Sin => write!(f, "sin{}", self.n),
        }
    }
}

impl FromStr for FourierMode {
    type Err = Error;

    /// Accepts `cos3`, `sin3`, or a bare `3` (cosine).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (parity, digits) = if let Some(rest) = s.strip_prefix("cos") {
            (Parity::Cos, rest)
        } else if let Some(rest) = s.strip_prefix("sin") {
            (Parity::Sin, rest)
        } else {
            (Parity::Cos, s)
        };
        let n = digits
            .parse::<u32>()
            .map_err(|_| Error::InvalidMode(format!("cannot parse mode '{s}'")))?;
        Self::new(n, parity)
    }
}

/// Split of the layer that cancels the first-order trace jump.
///
/// Only defined at mid-diffusion. A split outside the default band
/// `[DEFAULT_P_MIN, 1 - DEFAULT_P_MIN]` is still returned, with a warning.
pub fn mid_diffusion_split(params: &MaterialParams) -> Result<LayerSplit> {
    params.require_mid_diffusion()?;
    let MaterialParams {
        alpha_i,
        alpha_delta,
        alpha_e,
    } = *params;
    let denom = alpha_delta * (alpha_e - alpha_i);
    let p1 = alpha_i * (alpha_e - alpha_delta) / denom;
    let p2 = alpha_e * (alpha_delta - alpha_i) / denom;
    let split = LayerSplit::new(p1, p2)?;
    if !split.in_band(DEFAULT_P_MIN) {
        log::warn!(
            "mid-diffusion split ({p1:.4}, {p2:.4}) leaves the band [{DEFAULT_P_MIN}, {}]",
            1.0 - DEFAULT_P_MIN
        );
    }
    Ok(split)
}

/// Per-mode symbol of the Laplace-Beltrami operator on the circle of radius
/// `R`: `-n²/R²`.
pub fn surface_laplacian_symbol(mode: FourierMode, geometry: &CircleGeometry) -> f64 {
    let n = mode.n as f64;
    -(n * n) / (geometry.r() * geometry.r())
}

/// Radius of the point with scaled normal coordinate `s` on the given side:
/// `R + δ·p_β·s`.
pub fn layer_radius(
    geometry: &CircleGeometry,
    split: LayerSplit,
    delta: f64,
    side: Side,
    s: f64,
) -> Result<f64> {
    let (lo, hi) = side.coordinate_range();
    if !(lo..=hi).contains(&s) {
        return Err(Error::CoordinateOutOfRange {
            s,
            range: match side {
                Side::Inner => "[-1, 0]",
                Side::Outer => "[0, 1]",
            },
        });
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "layer thickness must be positive, got {delta}"
        )));
    }
    Ok(geometry.r() + delta * split.fraction(side) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn split_examples() {
        let s = mid_diffusion_split(&MaterialParams::new(1.0, 2.0, 4.0).unwrap()).unwrap();
        assert_relative_eq!(s.p1(), 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(s.p2(), 2.0 / 3.0, max_relative = 1e-15);

        let s = mid_diffusion_split(&MaterialParams::new(1.0, 3.0, 5.0).unwrap()).unwrap();
        assert_relative_eq!(s.p1(), 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(s.p2(), 5.0 / 6.0, max_relative = 1e-15);

        let err = mid_diffusion_split(&MaterialParams::new(1.0, 2.0, 1.5).unwrap()).unwrap_err();
        assert!(err.to_string().contains("not mid-diffusion"));
    }

    #[test]
    fn split_band() {
        // (1, 1.01, 100): alpha_delta hugs alpha_i, so p2 is tiny
        let s = mid_diffusion_split(&MaterialParams::new(1.0, 1.01, 100.0).unwrap()).unwrap();
        assert!(!s.in_band(DEFAULT_P_MIN));
        assert!(LayerSplit::from_p1(0.5).unwrap().in_band(DEFAULT_P_MIN));
    }

    #[test]
    fn split_validation() {
        assert!(LayerSplit::new(0.0, 1.0).is_err());
        assert!(LayerSplit::new(0.3, 0.6).is_err());
        assert!(LayerSplit::from_p1(1.2).is_err());
    }

    #[test]
    fn surface_laplacian_examples() {
        let unit = CircleGeometry::new(1.0, 2.0).unwrap();
        assert_eq!(surface_laplacian_symbol(FourierMode::cos(0), &unit), 0.0);
        assert_eq!(surface_laplacian_symbol(FourierMode::cos(2), &unit), -4.0);
        let two = CircleGeometry::new(2.0, 3.0).unwrap();
        assert_eq!(
            surface_laplacian_symbol(FourierMode::cos(3), &two),
            -9.0 / 4.0
        );
    }

    #[test]
    fn surface_laplacian_scaled_is_exact() {
        for r in [0.3, 1.0, 1.7, 2.5] {
            let g = CircleGeometry::new(r, r + 1.0).unwrap();
            for n in 0..=64u32 {
                let sym = surface_laplacian_symbol(FourierMode::cos(n), &g);
                assert!(sym <= 0.0);
                assert_relative_eq!(
                    sym * r * r,
                    -((n * n) as f64),
                    max_relative = 4.0 * f64::EPSILON
                );
            }
        }
        let g = CircleGeometry::new(1.0, 2.0).unwrap();
        for n in 0..=64u32 {
            assert_eq!(
                surface_laplacian_symbol(FourierMode::cos(n), &g),
                -((n * n) as f64)
            );
        }
    }

    #[test]
    fn layer_radius_examples() {
        let g = CircleGeometry::new(1.0, 2.0).unwrap();
        let split = LayerSplit::new(1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert_relative_eq!(
            layer_radius(&g, split, 0.3, Side::Inner, -1.0).unwrap(),
            0.9,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            layer_radius(&g, split, 0.3, Side::Outer, 1.0).unwrap(),
            1.2,
            max_relative = 1e-15
        );
        for side in Side::BOTH {
            assert_eq!(layer_radius(&g, split, 0.3, side, 0.0).unwrap(), 1.0);
        }
        assert!(layer_radius(&g, split, 0.3, Side::Inner, 0.5).is_err());
        assert!(layer_radius(&g, split, 0.3, Side::Outer, -0.1).is_err());
    }

    #[test]
    fn layer_must_fit() {
        let g = CircleGeometry::new(1.0, 1.1).unwrap();
        let split = LayerSplit::from_p1(0.5).unwrap();
        assert!(g.layer_bounds(split, 0.1).is_ok());
        assert!(g.layer_bounds(split, 0.3).is_err());
        assert!(CircleGeometry::new(2.0, 1.0).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("cos2".parse::<FourierMode>().unwrap(), FourierMode::cos(2));
        assert_eq!("3".parse::<FourierMode>().unwrap(), FourierMode::cos(3));
        assert_eq!(
            "sin4".parse::<FourierMode>().unwrap(),
            FourierMode::sin(4).unwrap()
        );
        assert!("sin0".parse::<FourierMode>().is_err());
        assert_eq!(FourierMode::cos(5).to_string(), "cos5");
    }
}
