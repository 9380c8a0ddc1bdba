//! Experiment configuration: a single JSON document, validated field by
//! field before any solve.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{ForcingSpec, ForcingTerm};
use crate::geometry::{
    mid_diffusion_split, CircleGeometry, FourierMode, LayerSplit, DEFAULT_P_MIN,
};
use crate::materials::MaterialParams;
use crate::reduced::UnsafeModel;
use crate::verification::{
    validate_ladder, QuadratureRule, Scenario, DEFAULT_LADDER, DEFAULT_ORDER_BAND,
    DEFAULT_SLOPE_BAND, MIN_CELLS,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub r: f64,
    pub r_ext: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SplitConfig {
    #[default]
    MidDiffusion,
    Explicit {
        p1: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_h0")]
    pub h0: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Layer thickness of the full configuration.
    #[serde(default = "default_oracle_delta")]
    pub delta: f64,
    #[serde(default = "default_order_band")]
    pub order_band: f64,
}

fn default_h0() -> f64 {
    1.0 / 16.0
}
fn default_levels() -> usize {
    4
}
fn default_oracle_delta() -> f64 {
    0.05
}
fn default_order_band() -> f64 {
    DEFAULT_ORDER_BAND
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            h0: default_h0(),
            levels: default_levels(),
            delta: default_oracle_delta(),
            order_band: default_order_band(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_slope_band")]
    pub slope_band: f64,
    /// Band `[p_min, 1 - p_min]` outside of which a split draws a warning.
    #[serde(default = "default_p_min")]
    pub p_min: f64,
}

fn default_slope_band() -> f64 {
    DEFAULT_SLOPE_BAND
}
fn default_p_min() -> f64 {
    DEFAULT_P_MIN
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slope_band: default_slope_band(),
            p_min: default_p_min(),
        }
    }
}

/// Raw configuration as read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    pub materials: MaterialParams,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub forcing: Vec<ForcingTerm>,
    /// Mode names such as `"cos0"`, `"sin3"`.
    pub modes: Vec<String>,
    #[serde(default = "default_ladder")]
    pub delta_ladder: Vec<f64>,
    #[serde(default = "default_points")]
    pub quadrature_points: usize,
    #[serde(default = "default_segments")]
    pub quadrature_segments: usize,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Sample points per region in the profile tables.
    #[serde(default = "default_samples")]
    pub profile_samples: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Solve the approximate model even when its trace jump does not vanish.
    #[serde(default)]
    pub unsafe_model: bool,
}

fn default_ladder() -> Vec<f64> {
    DEFAULT_LADDER.to_vec()
}
fn default_points() -> usize {
    16
}
fn default_segments() -> usize {
    4
}
fn default_samples() -> usize {
    9
}

/// Configuration after validation, with every domain object constructed.
#[derive(Debug, Clone)]
pub struct ValidatedConfig {
    pub scenario: Scenario,
    pub ladder: Vec<f64>,
    pub oracle: OracleConfig,
    pub tolerances: Tolerances,
    pub profile_samples: usize,
    pub output_dir: Option<PathBuf>,
    pub mid_diffusion: bool,
}

fn at<T>(path: impl Into<String>, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(path, other.to_string()),
    })
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(
                if path == "." { "config".into() } else { path },
                e.into_inner().to_string(),
            )
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    /// Parses mode names into modes, sorted and deduplicated.
    pub fn parse_modes(names: &[String]) -> Result<Vec<FourierMode>> {
        let mut modes = Vec::with_capacity(names.len());
        for (k, name) in names.iter().enumerate() {
            let mode: FourierMode = at(format!("modes[{k}]"), name.parse())?;
            modes.push(mode);
        }
        if modes.is_empty() {
            return Err(Error::config("modes", "at least one mode is required"));
        }
        modes.sort();
        modes.dedup();
        Ok(modes)
    }

    pub fn validate(&self) -> Result<ValidatedConfig> {
        let geometry = at(
            "geometry",
            CircleGeometry::new(self.geometry.r, self.geometry.r_ext),
        )?;
        let params = at(
            "materials",
            self.materials.validate().map(|_| self.materials),
        )?;
        let tol = &self.tolerances;
        if !(tol.slope_band > 0.0 && tol.slope_band.is_finite()) {
            return Err(Error::config("tolerances.slope_band", "must be positive"));
        }
        if !(0.0..0.5).contains(&tol.p_min) {
            return Err(Error::config("tolerances.p_min", "must lie in [0, 0.5)"));
        }
        let split = match self.split {
            SplitConfig::MidDiffusion => at("materials", mid_diffusion_split(&params))?,
            SplitConfig::Explicit { p1 } => at("split.p1", LayerSplit::from_p1(p1))?,
        };
        if !split.in_band(tol.p_min) {
            log::warn!(
                "split ({:.4}, {:.4}) leaves the band [{}, {}]",
                split.p1(),
                split.p2(),
                tol.p_min,
                1.0 - tol.p_min
            );
        }
        for (k, term) in self.forcing.iter().enumerate() {
            at(format!("forcing[{k}]"), term.validate())?;
        }
        let forcing = at("forcing", ForcingSpec::new(self.forcing.clone()))?;
        let modes = Self::parse_modes(&self.modes)?;
        at("delta_ladder", validate_ladder(&self.delta_ladder))?;
        for (k, &d) in self.delta_ladder.iter().enumerate() {
            at(
                format!("delta_ladder[{k}]"),
                geometry.layer_bounds(split, d),
            )?;
        }
        let rule = at(
            "quadrature_points",
            QuadratureRule::gauss_legendre(self.quadrature_points, self.quadrature_segments),
        )?;
        let oracle = &self.oracle;
        if !(oracle.h0 > 0.0 && oracle.h0.is_finite()) {
            return Err(Error::config("oracle.h0", "must be positive"));
        }
        if oracle.levels < 3 {
            return Err(Error::config(
                "oracle.levels",
                "need at least 3 grids for an order fit",
            ));
        }
        if oracle.h0 * MIN_CELLS as f64 > geometry.r_ext() {
            return Err(Error::config(
                "oracle.h0",
                "too coarse for the outer radius",
            ));
        }
        at("oracle.delta", geometry.layer_bounds(split, oracle.delta))?;
        if !(oracle.order_band > 0.0 && oracle.order_band.is_finite()) {
            return Err(Error::config("oracle.order_band", "must be positive"));
        }
        if self.profile_samples < 2 {
            return Err(Error::config(
                "profile_samples",
                "need at least 2 samples per region",
            ));
        }
        let unsafe_model = if self.unsafe_model {
            UnsafeModel::Allow
        } else {
            UnsafeModel::Refuse
        };
        let scenario = Scenario {
            geometry,
            params,
            split,
            forcing,
            modes,
            rule,
            unsafe_model,
        };
        let mid_diffusion = scenario.is_mid_diffusion();
        Ok(ValidatedConfig {
            scenario,
            ladder: self.delta_ladder.clone(),
            oracle: self.oracle.clone(),
            tolerances: self.tolerances.clone(),
            profile_samples: self.profile_samples,
            output_dir: self.output_dir.clone(),
            mid_diffusion,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULT: &str = include_str!("../../configs/default.json");

    #[test]
    fn default_config_validates() {
        let cfg = ExperimentConfig::from_json(DEFAULT)
            .unwrap()
            .validate()
            .unwrap();
        assert_eq!(
            cfg.scenario.modes,
            vec![FourierMode::cos(0), FourierMode::cos(2)]
        );
        assert_eq!(cfg.ladder, DEFAULT_LADDER.to_vec());
        assert!(cfg.mid_diffusion);
        assert!((cfg.scenario.split.p1() - 1.0 / 3.0).abs() < 1e-15);
    }

    fn with(edit: impl FnOnce(&mut serde_json::Value)) -> Result<ValidatedConfig> {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT).unwrap();
        edit(&mut v);
        ExperimentConfig::from_json(&v.to_string())?.validate()
    }

    fn path_of(r: Result<ValidatedConfig>) -> String {
        match r {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_name_the_field() {
        assert_eq!(
            path_of(with(|v| v["materials"]["alpha_e"] = 1.5.into())),
            "materials"
        );
        assert_eq!(
            path_of(with(|v| v["geometry"]["r_ext"] = 0.5.into())),
            "geometry"
        );
        assert_eq!(path_of(with(|v| v["modes"][1] = "sin0".into())), "modes[1]");
        assert_eq!(
            path_of(with(|v| v["delta_ladder"] = serde_json::json!([0.1]))),
            "delta_ladder"
        );
        assert_eq!(
            path_of(with(
                |v| v["delta_ladder"] = serde_json::json!([5.0, 2.0, 1.0])
            )),
            "delta_ladder[0]"
        );
        assert_eq!(
            path_of(with(|v| v["quadrature_points"] = 4.into())),
            "quadrature_points"
        );
        assert_eq!(
            path_of(with(|v| v["forcing"][0]["power"] = (-1).into())),
            "forcing[0].power"
        );
        assert_eq!(path_of(with(|v| v["bogus"] = 1.into())), "bogus");
    }

    #[test]
    fn explicit_split() {
        let cfg =
            with(|v| v["split"] = serde_json::json!({"kind": "explicit", "p1": 0.5})).unwrap();
        assert!(!cfg.mid_diffusion);
        assert_eq!(cfg.scenario.split.p1(), 0.5);
    }
}
