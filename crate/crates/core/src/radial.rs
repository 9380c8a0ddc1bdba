//! Closed-form radial factors: homogeneous solutions of the mode-`n` radial
//! Laplacian plus polynomial particular parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{ForcingSpec, ForcingTerm};
use crate::geometry::FourierMode;

/// `coefficient · r^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coefficient: f64,
    pub power: u32,
}

/// Whether to evaluate a radial factor or its first `r`-derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Value,
    First,
}

/// Radial factor
///
/// ```text
/// n ≥ 1:  a·(r/g)^n + b·(d/r)^n + Σ c_k r^{p_k}
/// n = 0:  a + b·ln(r/d)         + Σ c_k r^{p_k}
/// ```
///
/// where `g` (growth scale) and `d` (decay scale) are the outer and inner
/// radius of the region the piece lives on, so both basis functions are
/// bounded by one there. Pieces touching the origin carry `b = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialPiece {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub growth_scale: f64,
    pub decay_scale: f64,
    pub particular: Vec<PowerTerm>,
}

impl RadialPiece {
    pub fn zero(n: u32, growth_scale: f64, decay_scale: f64) -> Self {
        Self {
            n,
            a: 0.0,
            b: 0.0,
            growth_scale,
            decay_scale,
            particular: Vec::new(),
        }
    }

    pub fn is_regular_at_origin(&self) -> bool {
        self.b == 0.0
    }

    /// Homogeneous basis values `(φ_grow, φ_decay)` at `r`.
    pub fn basis(n: u32, growth_scale: f64, decay_scale: f64, r: f64) -> (f64, f64) {
        if n == 0 {
            (1.0, (r / decay_scale).ln())
        } else {
            let k = n as i32;
            ((r / growth_scale).powi(k), (decay_scale / r).powi(k))
        }
    }

    /// Derivatives of the homogeneous basis at `r`.
    pub fn basis_derivative(n: u32, growth_scale: f64, decay_scale: f64, r: f64) -> (f64, f64) {
        if n == 0 {
            (0.0, 1.0 / r)
        } else {
            let k = n as i32;
            let nf = n as f64;
            (
                nf / growth_scale * (r / growth_scale).powi(k - 1),
                -nf / r * (decay_scale / r).powi(k),
            )
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let mut v = 0.0;
        if self.a != 0.0 {
            v += self.a * Self::basis(self.n, self.growth_scale, self.decay_scale, r).0;
        }
        if self.b != 0.0 {
            v += self.b * Self::basis(self.n, self.growth_scale, self.decay_scale, r).1;
        }
        v + self
            .particular
            .iter()
            .map(|t| t.coefficient * r.powi(t.power as i32))
            .sum::<f64>()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let mut v = 0.0;
        if self.a != 0.0 {
            v += self.a * Self::basis_derivative(self.n, self.growth_scale, self.decay_scale, r).0;
        }
        if self.b != 0.0 {
            v += self.b * Self::basis_derivative(self.n, self.growth_scale, self.decay_scale, r).1;
        }
        v + self
            .particular
            .iter()
            .filter(|t| t.power > 0)
            .map(|t| t.coefficient * t.power as f64 * r.powi(t.power as i32 - 1))
            .sum::<f64>()
    }

    pub fn eval(&self, r: f64, order: Derivative) -> f64 {
        match order {
            Derivative::Value => self.value(r),
            Derivative::First => self.derivative(r),
        }
    }

    /// `(value, derivative)` at `r`.
    pub fn value_and_derivative(&self, r: f64) -> (f64, f64) {
        (self.value(r), self.derivative(r))
    }

    /// `self + factor·other`. Both pieces must share the mode and scales.
    pub fn add_scaled(&self, other: &RadialPiece, factor: f64) -> RadialPiece {
        assert_eq!(self.n, other.n, "mismatched modes");
        assert_eq!(
            self.growth_scale, other.growth_scale,
            "mismatched growth scales"
        );
        assert_eq!(
            self.decay_scale, other.decay_scale,
            "mismatched decay scales"
        );
        let mut particular = self.particular.clone();
        for t in &other.particular {
            particular.push(PowerTerm {
                coefficient: factor * t.coefficient,
                power: t.power,
            });
        }
        RadialPiece {
            n: self.n,
            a: self.a + factor * other.a,
            b: self.b + factor * other.b,
            growth_scale: self.growth_scale,
            decay_scale: self.decay_scale,
            particular: merge_powers(particular),
        }
    }

    pub fn scaled(&self, factor: f64) -> RadialPiece {
        RadialPiece::zero(self.n, self.growth_scale, self.decay_scale).add_scaled(self, factor)
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.particular
            .iter()
            .map(|t| t.coefficient.abs())
            .fold(self.a.abs().max(self.b.abs()), f64::max)
    }
}

/// Sums coefficients sharing a power, keeping powers in increasing order.
pub fn merge_powers(mut terms: Vec<PowerTerm>) -> Vec<PowerTerm> {
    terms.sort_by_key(|t| t.power);
    let mut merged: Vec<PowerTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.last_mut() {
            Some(last) if last.power == t.power => last.coefficient += t.coefficient,
            _ => merged.push(t),
        }
    }
    merged
}

/// Particular solution of `-α((1/r)(r u')' - n²u/r²) = c·r^m`:
/// `u_p = -c / (α((m+2)² - n²)) · r^{m+2}`.
pub fn particular_radial(term: &ForcingTerm, alpha: f64) -> Result<PowerTerm> {
    let n = term.mode.n;
    let p = term.power + 2;
    if p == n {
        return Err(Error::ResonantForcing {
            power: term.power,
            n,
        });
    }
    let denom = alpha * ((p * p) as f64 - (n as f64) * (n as f64));
    Ok(PowerTerm {
        coefficient: -term.coefficient / denom,
        power: p,
    })
}

/// Particular part for every forcing term on `mode`, in a region of
/// conductivity `alpha`.
pub fn particular_for_mode(
    forcing: &ForcingSpec,
    mode: FourierMode,
    alpha: f64,
) -> Result<Vec<PowerTerm>> {
    let terms = forcing
        .terms_for(mode)
        .map(|t| particular_radial(t, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_powers(terms))
}

/// Applies `-α((1/r)(r u')' - n²u/r²)` to `coefficient·r^power` in closed
/// form. Returns the coefficient of `r^{power-2}`.
pub fn apply_radial_operator(term: PowerTerm, n: u32, alpha: f64) -> f64 {
    let p = term.power as f64;
    let nf = n as f64;
    -alpha * term.coefficient * (p * p - nf * nf)
}
