//! Volume sources given as finite sums of separable terms `c·r^m·{cos,sin}(nθ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::FourierMode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcingTerm {
    pub coefficient: f64,
    /// Radial power `m`.
    pub power: u32,
    #[serde(flatten)]
    pub mode: FourierMode,
}

impl ForcingTerm {
    pub fn new(coefficient: f64, power: u32, mode: FourierMode) -> Result<Self> {
        let term = Self {
            coefficient,
            power,
            mode,
        };
        term.validate()?;
        Ok(term)
    }

    pub fn validate(&self) -> Result<()> {
        self.mode.validate()?;
        if !self.coefficient.is_finite() {
            return Err(Error::InvalidMode(format!(
                "forcing coefficient must be finite, got {}",
                self.coefficient
            )));
        }
        if self.power + 2 == self.mode.n {
            return Err(Error::ResonantForcing {
                power: self.power,
                n: self.mode.n,
            });
        }
        Ok(())
    }

    pub fn value(&self, r: f64) -> f64 {
        self.coefficient * r.powi(self.power as i32)
    }
}

/// Validated list of forcing terms. Several terms may share a mode.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ForcingTerm>", into = "Vec<ForcingTerm>")]
pub struct ForcingSpec {
    terms: Vec<ForcingTerm>,
}

impl ForcingSpec {
    pub fn new(terms: Vec<ForcingTerm>) -> Result<Self> {
        for term in &terms {
            term.validate()?;
        }
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Single term `c·r^m` on `mode`.
    pub fn single(coefficient: f64, power: u32, mode: FourierMode) -> Result<Self> {
        Self::new(vec![ForcingTerm::new(coefficient, power, mode)?])
    }

    pub fn terms(&self) -> &[ForcingTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms that project onto `mode`.
    pub fn terms_for(&self, mode: FourierMode) -> impl Iterator<Item = &ForcingTerm> + '_ {
        self.terms.iter().filter(move |t| t.mode == mode)
    }

    /// Sorted, deduplicated modes carried by the forcing.
    pub fn modes(&self) -> Vec<FourierMode> {
        let mut modes: Vec<_> = self.terms.iter().map(|t| t.mode).collect();
        modes.sort();
        modes.dedup();
        modes
    }

    /// Radial factor of the projection on `mode`.
    pub fn radial_value(&self, mode: FourierMode, r: f64) -> f64 {
        self.terms_for(mode).map(|t| t.value(r)).sum()
    }

    /// Concatenation of two specs.
    pub fn combined(&self, other: &ForcingSpec) -> ForcingSpec {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        ForcingSpec { terms }
    }
}

impl TryFrom<Vec<ForcingTerm>> for ForcingSpec {
    type Error = Error;

    fn try_from(terms: Vec<ForcingTerm>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<ForcingSpec> for Vec<ForcingTerm> {
    fn from(spec: ForcingSpec) -> Self {
        spec.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_power_rejected() {
        let err = ForcingTerm::new(1.0, 0, FourierMode::cos(2)).unwrap_err();
        assert!(matches!(err, Error::ResonantForcing { power: 0, n: 2 }));
        assert!(ForcingTerm::new(1.0, 1, FourierMode::cos(2)).is_ok());
    }

    #[test]
    fn modes_are_sorted_unique() {
        let spec = ForcingSpec::new(vec![
            ForcingTerm::new(1.0, 1, FourierMode::cos(2)).unwrap(),
            ForcingTerm::new(4.0, 0, FourierMode::cos(0)).unwrap(),
            ForcingTerm::new(2.0, 2, FourierMode::cos(0)).unwrap(),
        ])
        .unwrap();
        assert_eq!(spec.modes(), vec![FourierMode::cos(0), FourierMode::cos(2)]);
        assert_eq!(spec.radial_value(FourierMode::cos(0), 0.5), 4.0 + 0.5);
    }

    #[test]
    fn json_shape() {
        let spec: ForcingSpec = serde_json::from_str(
            r#"[{"coefficient": 4.0, "power": 0, "n": 0},
                {"coefficient": 1.0, "power": 1, "n": 2, "parity": "cos"}]"#,
        )
        .unwrap();
        assert_eq!(spec.terms().len(), 2);
        assert!(serde_json::from_str::<ForcingSpec>(
            r#"[{"coefficient": 1.0, "power": 1, "n": 3}]"#
        )
        .is_err());
    }
}
