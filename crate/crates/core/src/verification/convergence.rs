//! Convergence studies over a ladder of layer thicknesses: the asymptotic
//! expansion and the approximate model against the exact layered solution.

use serde::{Deserialize, Serialize};

use crate::analytic::{
    layer_profile_order0, layer_profile_order1, solve_full_mode, solve_u0_mode, solve_u1_mode,
    FullModeSolution, FullRegion, LayerFunction, TwoRegionModeSolution,
};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, ExecPolicy};
use crate::forcing::{ForcingSpec, ForcingTerm};
use crate::geometry::{mid_diffusion_split, CircleGeometry, FourierMode, LayerSplit, Side};
use crate::materials::MaterialParams;
use crate::radial::RadialPiece;
use crate::reduced::{
    reconstruct_layer_ap, solve_general_reduced_mode, solve_reduced_mode,
    solve_reduced_mode_direct, sum_expansion, w_expansion, ReducedModeSolution, UnsafeModel,
};

use super::quadrature::{h1_norm_mode, QuadratureRule};
use super::slope::{fit_slope, SlopeFit};

pub const DEFAULT_LADDER: [f64; 5] = [0.1, 0.05, 0.025, 0.0125, 0.00625];
pub const DEFAULT_SLOPE_BAND: f64 = 0.15;
/// Errors below this (relative to the solution norm) count as exact.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// Everything a study needs apart from the ladder.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: CircleGeometry,
    pub params: MaterialParams,
    pub split: LayerSplit,
    pub forcing: ForcingSpec,
    pub modes: Vec<FourierMode>,
    pub rule: QuadratureRule,
    pub unsafe_model: UnsafeModel,
}

impl Scenario {
    /// `R = 1`, `R_ext = 2`, `α = (1, 2, 4)`, `f = 4 + r·cos 2θ`, modes 0 and 2.
    pub fn default_scenario() -> Self {
        let params = MaterialParams::new(1.0, 2.0, 4.0).expect("valid materials");
        let forcing = ForcingSpec::new(vec![
            ForcingTerm::new(4.0, 0, FourierMode::cos(0)).expect("valid term"),
            ForcingTerm::new(1.0, 1, FourierMode::cos(2)).expect("valid term"),
        ])
        .expect("valid forcing");
        Self {
            geometry: CircleGeometry::new(1.0, 2.0).expect("valid geometry"),
            split: mid_diffusion_split(&params).expect("mid-diffusion"),
            params,
            forcing,
            modes: vec![FourierMode::cos(0), FourierMode::cos(2)],
            rule: QuadratureRule::default(),
            unsafe_model: UnsafeModel::Refuse,
        }
    }

    /// Whether the split zeroes the trace jump for these materials.
    pub fn is_mid_diffusion(&self) -> bool {
        self.params.is_mid_diffusion()
            && self.params.trace_jump_coefficient(self.split).abs() <= 1e-13
    }
}

/// Which comparison a study runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    /// Full solution against `u_0` (bulk) and the order-0 layer profile.
    Theorem2Order0,
    /// Full solution against `u_0 + δu_1` and the order-1 profiles.
    Theorem2Order1,
    /// Full solution against the approximate model and its reconstruction.
    Theorem4,
    /// Approximate model against `w_0 + δw_1` on the limit domains.
    WExpansion,
}

impl Study {
    pub const ALL: [Study; 4] = [
        Study::Theorem2Order0,
        Study::Theorem2Order1,
        Study::Theorem4,
        Study::WExpansion,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Study::Theorem2Order0 => "theorem2_order0",
            Study::Theorem2Order1 => "theorem2_order1",
            Study::Theorem4 => "theorem4",
            Study::WExpansion => "w_expansion",
        }
    }

    pub fn expected_slope(self) -> f64 {
        match self {
            Study::Theorem2Order0 => 1.0,
            _ => 2.0,
        }
    }

    pub fn grouping(self) -> LayerGrouping {
        match self {
            Study::Theorem2Order0 | Study::Theorem2Order1 => LayerGrouping::Combined,
            Study::Theorem4 | Study::WExpansion => LayerGrouping::PerSide,
        }
    }

    /// Lower bound on the slope of the weighted layer error alone.
    pub fn layer_floor(self) -> Option<f64> {
        match self {
            Study::Theorem2Order0 => Some(0.85),
            Study::Theorem2Order1 => Some(1.85),
            _ => None,
        }
    }
}

/// How the two sub-layer norms enter the weighted layer term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerGrouping {
    /// `δ^{1/2}·‖·‖_{layer}` over the whole layer.
    Combined,
    /// `δ^{1/2}·(‖·‖_{side 1} + ‖·‖_{side 2})`.
    PerSide,
}

impl LayerGrouping {
    pub fn weighted(self, delta: f64, sides: [f64; 2]) -> f64 {
        let raw = match self {
            LayerGrouping::Combined => sides[0].hypot(sides[1]),
            LayerGrouping::PerSide => sides[0] + sides[1],
        };
        delta.sqrt() * raw
    }
}

/// Unweighted H¹ errors of one mode at one thickness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeError {
    pub mode: FourierMode,
    pub inner: f64,
    pub layer: [f64; 2],
    pub outer: f64,
    /// H¹ norm of the reference solution, for relative statements.
    pub reference: f64,
    /// Study-specific consistency gap (route agreement or term agreement).
    pub gap: Option<f64>,
}

impl ModeError {
    pub fn layer_weighted(&self, delta: f64, grouping: LayerGrouping) -> f64 {
        grouping.weighted(delta, self.layer)
    }

    pub fn composite(&self, delta: f64, grouping: LayerGrouping) -> f64 {
        self.inner + self.layer_weighted(delta, grouping) + self.outer
    }
}

/// Errors at one thickness, summed over modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub delta: f64,
    pub grouping: LayerGrouping,
    pub modes: Vec<ModeError>,
    pub err_i_h1: f64,
    pub err_layer_h1_weighted: f64,
    pub err_e_h1: f64,
    pub composite: f64,
    pub reference_norm: f64,
    pub gap: Option<f64>,
}

impl ErrorRecord {
    /// Aggregates per-mode errors. Distinct modes are orthogonal in H¹, so
    /// every region norm is the root sum of squares over modes.
    pub fn from_modes(delta: f64, grouping: LayerGrouping, mut modes: Vec<ModeError>) -> Self {
        modes.sort_by_key(|m| m.mode);
        let rss =
            |f: &dyn Fn(&ModeError) -> f64| modes.iter().map(|m| f(m).powi(2)).sum::<f64>().sqrt();
        let err_i_h1 = rss(&|m| m.inner);
        let err_e_h1 = rss(&|m| m.outer);
        let sides = [rss(&|m| m.layer[0]), rss(&|m| m.layer[1])];
        let err_layer_h1_weighted = grouping.weighted(delta, sides);
        let reference_norm = rss(&|m| m.reference);
        let gap = modes.iter().filter_map(|m| m.gap).reduce(f64::max);
        Self {
            delta,
            grouping,
            err_i_h1,
            err_layer_h1_weighted,
            err_e_h1,
            composite: err_i_h1 + err_layer_h1_weighted + err_e_h1,
            reference_norm,
            gap,
            modes,
        }
    }

    /// Combines records of disjoint mode sets at the same thickness.
    pub fn merge(self, other: ErrorRecord) -> Result<ErrorRecord> {
        if self.delta != other.delta || self.grouping != other.grouping {
            return Err(Error::InvalidMode(format!(
                "cannot merge records at δ = {} and δ = {}",
                self.delta, other.delta
            )));
        }
        let mut modes = self.modes;
        for m in other.modes {
            if modes.iter().any(|x| x.mode == m.mode) {
                return Err(Error::InvalidMode(format!("mode {} appears twice", m.mode)));
            }
            modes.push(m);
        }
        Ok(ErrorRecord::from_modes(self.delta, self.grouping, modes))
    }

    /// Bulk errors vanish to roundoff.
    pub fn bulk_is_exact(&self) -> bool {
        self.err_i_h1 + self.err_e_h1 <= EXACT_TOLERANCE * self.reference_norm.max(1.0)
    }
}

/// `‖u − v‖_{H¹}` of one mode over `[lo, hi]`.
fn h1_gap<F, G>(lo: f64, hi: f64, n: u32, u: F, v: G, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
    G: Fn(f64) -> (f64, f64),
{
    h1_norm_mode(
        lo,
        hi,
        n,
        |r| {
            let (a, da) = u(r);
            let (b, db) = v(r);
            (a - b, da - db)
        },
        rule,
    )
}

fn full_reference_norm(full: &FullModeSolution, rule: &QuadratureRule) -> Result<f64> {
    let mut sq = 0.0;
    for region in FullRegion::ALL {
        let (lo, hi) = full.interval(region);
        let piece = full.piece(region);
        sq += h1_norm_mode(lo, hi, full.mode.n, |r| piece.value_and_derivative(r), rule)?.powi(2);
    }
    Ok(sq.sqrt())
}

/// Errors of the full solution against bulk comparators and two layer
/// functions.
fn full_against(
    full: &FullModeSolution,
    inner: &RadialPiece,
    outer: &RadialPiece,
    layers: [LayerFunction; 2],
    rule: &QuadratureRule,
) -> Result<ModeError> {
    let n = full.mode.n;
    let bulk = |region: FullRegion, cmp: &RadialPiece| -> Result<f64> {
        let (lo, hi) = full.interval(region);
        let piece = full.piece(region);
        h1_gap(
            lo,
            hi,
            n,
            |r| piece.value_and_derivative(r),
            |r| cmp.value_and_derivative(r),
            rule,
        )
    };
    let mut layer = [0.0; 2];
    for (k, side) in Side::BOTH.into_iter().enumerate() {
        let region = FullRegion::Layer(side);
        let (lo, hi) = full.interval(region);
        let piece = full.piece(region);
        let lf = &layers[k];
        layer[k] = h1_gap(
            lo,
            hi,
            n,
            |r| piece.value_and_derivative(r),
            |r| lf.value_and_derivative(r),
            rule,
        )?;
    }
    Ok(ModeError {
        mode: full.mode,
        inner: bulk(FullRegion::Inner, inner)?,
        layer,
        outer: bulk(FullRegion::Outer, outer)?,
        reference: full_reference_norm(full, rule)?,
        gap: None,
    })
}

/// Expansion comparison for one mode: the full solution against the
/// expansion truncated at `order` (0 or 1).
pub fn theorem2_mode_error(
    order: u32,
    delta: f64,
    mode: FourierMode,
    scenario: &Scenario,
) -> Result<ModeError> {
    if order > 1 {
        return Err(Error::InvalidMode(format!(
            "expansion order must be 0 or 1, got {order}"
        )));
    }
    let Scenario {
        geometry,
        params,
        split,
        forcing,
        rule,
        ..
    } = scenario;
    let full = solve_full_mode(mode, delta, params, geometry, *split, forcing)?;
    let u0 = solve_u0_mode(mode, params, geometry, forcing)?;
    let (expansion, layers) = if order == 0 {
        let layers = Side::BOTH.map(|side| {
            LayerFunction::from_expansion(
                side,
                geometry.r(),
                *split,
                delta,
                &[layer_profile_order0(side, &u0)],
            )
        });
        (u0, layers)
    } else {
        let u1 = solve_u1_mode(mode, params, geometry, *split, &u0)?;
        let layers = Side::BOTH.map(|side| {
            LayerFunction::from_expansion(
                side,
                geometry.r(),
                *split,
                delta,
                &[
                    layer_profile_order0(side, &u0),
                    layer_profile_order1(side, params, *split, &u0, &u1),
                ],
            )
        });
        (u0.add_scaled(&u1, delta), layers)
    };
    full_against(&full, &expansion.inner, &expansion.outer, layers, rule)
}

pub fn theorem2_errors(order: u32, delta: f64, scenario: &Scenario) -> Result<ErrorRecord> {
    let modes = scenario
        .modes
        .iter()
        .map(|&m| theorem2_mode_error(order, delta, m, scenario))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorRecord::from_modes(
        delta,
        LayerGrouping::Combined,
        modes,
    ))
}

/// Largest coefficient difference between two two-region solutions, relative
/// to their size.
fn coefficient_gap(a: &TwoRegionModeSolution, b: &TwoRegionModeSolution) -> f64 {
    let diff = a.add_scaled(b, -1.0).max_coefficient();
    diff / a.max_coefficient().max(b.max_coefficient()).max(1.0)
}

fn reduced_for(
    delta: f64,
    mode: FourierMode,
    scenario: &Scenario,
) -> Result<(ReducedModeSolution, Option<f64>)> {
    let Scenario {
        geometry,
        params,
        split,
        forcing,
        unsafe_model,
        ..
    } = scenario;
    if scenario.is_mid_diffusion() {
        let dtn = solve_reduced_mode(mode, delta, params, geometry, forcing)?;
        let direct = solve_reduced_mode_direct(mode, delta, params, geometry, forcing)?;
        let gap = coefficient_gap(&dtn.solution, &direct.solution);
        Ok((dtn, Some(gap)))
    } else {
        let sol = solve_general_reduced_mode(
            mode,
            delta,
            params,
            geometry,
            *split,
            forcing,
            *unsafe_model,
        )?;
        Ok((sol, None))
    }
}

/// Approximate-model comparison for one mode: the full solution against the
/// approximate model, with the reconstructed layer. The gap records how far
/// the boundary-equation and direct routes disagree.
pub fn theorem4_mode_error(
    delta: f64,
    mode: FourierMode,
    scenario: &Scenario,
) -> Result<ModeError> {
    let Scenario {
        geometry,
        params,
        split,
        forcing,
        rule,
        ..
    } = scenario;
    let full = solve_full_mode(mode, delta, params, geometry, *split, forcing)?;
    let (reduced, gap) = reduced_for(delta, mode, scenario)?;
    let layers = Side::BOTH.map(|side| reconstruct_layer_ap(side, delta, params, *split, &reduced));
    let mut err = full_against(&full, reduced.inner(), reduced.outer(), layers, rule)?;
    err.gap = gap;
    Ok(err)
}

pub fn theorem4_errors(delta: f64, scenario: &Scenario) -> Result<ErrorRecord> {
    let modes = scenario
        .modes
        .iter()
        .map(|&m| theorem4_mode_error(delta, m, scenario))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorRecord::from_modes(
        delta,
        LayerGrouping::PerSide,
        modes,
    ))
}

/// Approximate model against `w_0 + δw_1` on `[0, R]` and `[R, R_ext]`. The
/// gap records how far `w_0, w_1` are from `u_0, u_1`.
pub fn w_expansion_mode_error(
    delta: f64,
    mode: FourierMode,
    scenario: &Scenario,
) -> Result<ModeError> {
    let Scenario {
        geometry,
        params,
        split,
        forcing,
        rule,
        ..
    } = scenario;
    let (reduced, _) = reduced_for(delta, mode, scenario)?;
    let terms = w_expansion(2, mode, params, geometry, forcing)?;
    let u0 = solve_u0_mode(mode, params, geometry, forcing)?;
    let u1 = solve_u1_mode(mode, params, geometry, *split, &u0)?;
    let gap = coefficient_gap(&terms[0], &u0).max(coefficient_gap(&terms[1], &u1));
    let sum = sum_expansion(&terms, delta).expect("two terms");
    let (r, r_ext, n) = (geometry.r(), geometry.r_ext(), mode.n);
    let inner = h1_gap(
        0.0,
        r,
        n,
        |x| reduced.inner().value_and_derivative(x),
        |x| sum.inner.value_and_derivative(x),
        rule,
    )?;
    let outer = h1_gap(
        r,
        r_ext,
        n,
        |x| reduced.outer().value_and_derivative(x),
        |x| sum.outer.value_and_derivative(x),
        rule,
    )?;
    let reference = h1_norm_mode(0.0, r, n, |x| reduced.inner().value_and_derivative(x), rule)?
        .hypot(h1_norm_mode(
            r,
            r_ext,
            n,
            |x| reduced.outer().value_and_derivative(x),
            rule,
        )?);
    Ok(ModeError {
        mode,
        inner,
        layer: [0.0, 0.0],
        outer,
        reference,
        gap: Some(gap),
    })
}

pub fn mode_error(
    study: Study,
    delta: f64,
    mode: FourierMode,
    scenario: &Scenario,
) -> Result<ModeError> {
    match study {
        Study::Theorem2Order0 => theorem2_mode_error(0, delta, mode, scenario),
        Study::Theorem2Order1 => theorem2_mode_error(1, delta, mode, scenario),
        Study::Theorem4 => theorem4_mode_error(delta, mode, scenario),
        Study::WExpansion => w_expansion_mode_error(delta, mode, scenario),
    }
}

/// Checks that the ladder is positive and strictly decreasing with at least
/// enough points for a slope.
pub fn validate_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < super::slope::MIN_PAIRS {
        return Err(Error::DegenerateLadder(format!(
            "need at least {} thicknesses, got {}",
            super::slope::MIN_PAIRS,
            ladder.len()
        )));
    }
    if let Some(d) = ladder.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::DegenerateLadder(format!(
            "thickness {d} is not positive"
        )));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::DegenerateLadder(
            "thicknesses must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Ok,
    OutOfBand,
    /// Bulk errors vanish at every thickness; no slope is fitted.
    ExactReproduction,
    /// The study does not apply to the scenario.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub study: Study,
    pub expected_slope: f64,
    pub band: f64,
    pub records: Vec<ErrorRecord>,
    pub fit: Option<SlopeFit>,
    pub layer_fit: Option<SlopeFit>,
    pub layer_floor: Option<f64>,
    pub status: ReportStatus,
    pub note: Option<String>,
}

impl ConvergenceReport {
    pub fn in_band(&self) -> bool {
        matches!(
            self.status,
            ReportStatus::Ok | ReportStatus::ExactReproduction | ReportStatus::Skipped
        )
    }

    pub fn max_gap(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.gap).reduce(f64::max)
    }

    fn skipped(study: Study, band: f64, note: String) -> Self {
        Self {
            study,
            expected_slope: study.expected_slope(),
            band,
            records: Vec::new(),
            fit: None,
            layer_fit: None,
            layer_floor: study.layer_floor(),
            status: ReportStatus::Skipped,
            note: Some(note),
        }
    }
}

/// Runs `study` over the ladder. Every `(δ, mode)` pair is independent and
/// evaluated under `policy`; records come back in ladder order.
pub fn run_study(
    study: Study,
    ladder: &[f64],
    scenario: &Scenario,
    policy: ExecPolicy,
    band: f64,
) -> Result<ConvergenceReport> {
    validate_ladder(ladder)?;
    if matches!(study, Study::Theorem4 | Study::WExpansion)
        && !scenario.is_mid_diffusion()
        && scenario.unsafe_model == UnsafeModel::Refuse
    {
        return Ok(ConvergenceReport::skipped(
            study,
            band,
            "split is not mid-diffusion; approximate model not solved".into(),
        ));
    }
    let jobs: Vec<(f64, FourierMode)> = ladder
        .iter()
        .flat_map(|&d| scenario.modes.iter().map(move |&m| (d, m)))
        .collect();
    let results = map_ordered(policy, &jobs, |&(d, m)| mode_error(study, d, m, scenario));
    let mut per_delta: Vec<Vec<ModeError>> = vec![Vec::new(); ladder.len()];
    for ((d, _), res) in jobs.iter().zip(results) {
        let k = ladder.iter().position(|x| x == d).expect("ladder point");
        per_delta[k].push(res?);
    }
    let grouping = study.grouping();
    let records: Vec<ErrorRecord> = ladder
        .iter()
        .zip(per_delta)
        .map(|(&d, modes)| ErrorRecord::from_modes(d, grouping, modes))
        .collect();

    let expected = study.expected_slope();
    if records.iter().all(ErrorRecord::bulk_is_exact) {
        return Ok(ConvergenceReport {
            study,
            expected_slope: expected,
            band,
            records,
            fit: None,
            layer_fit: None,
            layer_floor: study.layer_floor(),
            status: ReportStatus::ExactReproduction,
            note: Some("bulk errors vanish to roundoff at every thickness".into()),
        });
    }
    let fit = fit_slope(
        &records
            .iter()
            .map(|r| (r.delta, r.composite))
            .collect::<Vec<_>>(),
    )?;
    let layer_fit = study.layer_floor().and_then(|_| {
        fit_slope(
            &records
                .iter()
                .map(|r| (r.delta, r.err_layer_h1_weighted))
                .collect::<Vec<_>>(),
        )
        .ok()
    });
    let mut in_band = (fit.slope - expected).abs() <= band;
    if let (Some(floor), Some(lf)) = (study.layer_floor(), layer_fit) {
        in_band &= lf.slope >= floor;
    }
    Ok(ConvergenceReport {
        study,
        expected_slope: expected,
        band,
        records,
        fit: Some(fit),
        layer_fit,
        layer_floor: study.layer_floor(),
        status: if in_band {
            ReportStatus::Ok
        } else {
            ReportStatus::OutOfBand
        },
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_scenario() -> Scenario {
        Scenario {
            params: MaterialParams::uniform(2.0).unwrap(),
            split: LayerSplit::from_p1(0.5).unwrap(),
            ..Scenario::default_scenario()
        }
    }

    #[test]
    fn grouping_weights() {
        assert_eq!(LayerGrouping::Combined.weighted(0.25, [3.0, 4.0]), 2.5);
        assert_eq!(LayerGrouping::PerSide.weighted(0.25, [3.0, 4.0]), 3.5);
    }

    #[test]
    fn record_composite_is_sum_of_parts() {
        let s = Scenario::default_scenario();
        let rec = theorem2_errors(1, 0.05, &s).unwrap();
        assert_eq!(
            rec.composite,
            rec.err_i_h1 + rec.err_layer_h1_weighted + rec.err_e_h1
        );
        assert!(rec.err_i_h1 >= 0.0 && rec.err_layer_h1_weighted >= 0.0 && rec.err_e_h1 >= 0.0);
        assert_eq!(rec.modes.len(), 2);
    }

    #[test]
    fn merge_is_order_independent() {
        let s = Scenario::default_scenario();
        let a = theorem4_mode_error(0.05, FourierMode::cos(0), &s).unwrap();
        let b = theorem4_mode_error(0.05, FourierMode::cos(2), &s).unwrap();
        let ra = ErrorRecord::from_modes(0.05, LayerGrouping::PerSide, vec![a.clone()]);
        let rb = ErrorRecord::from_modes(0.05, LayerGrouping::PerSide, vec![b.clone()]);
        let ab = ra.clone().merge(rb.clone()).unwrap();
        let ba = rb.merge(ra.clone()).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(
            ab,
            ErrorRecord::from_modes(0.05, LayerGrouping::PerSide, vec![b, a])
        );
        assert!(ra.clone().merge(ra).is_err());
    }

    #[test]
    fn uniform_materials_reproduce_bulk_exactly() {
        let s = uniform_scenario();
        for d in DEFAULT_LADDER {
            for order in [0, 1] {
                let rec = theorem2_errors(order, d, &s).unwrap();
                assert!(rec.bulk_is_exact(), "{rec:?}");
            }
        }
        let report = run_study(
            Study::Theorem2Order1,
            &DEFAULT_LADDER,
            &s,
            ExecPolicy::Sequential,
            0.15,
        )
        .unwrap();
        assert_eq!(report.status, ReportStatus::ExactReproduction);
        assert!(report.fit.is_none());
    }

    #[test]
    fn approximate_model_gated_on_mid_diffusion() {
        let s = uniform_scenario();
        let report = run_study(
            Study::Theorem4,
            &DEFAULT_LADDER,
            &s,
            ExecPolicy::Sequential,
            0.15,
        )
        .unwrap();
        assert_eq!(report.status, ReportStatus::Skipped);
        let explicit = Scenario {
            split: LayerSplit::from_p1(0.5).unwrap(),
            ..Scenario::default_scenario()
        };
        assert!(matches!(
            theorem4_errors(0.05, &explicit),
            Err(Error::UnsafeModel(_))
        ));
    }

    #[test]
    fn zero_forcing_zero_errors() {
        let s = Scenario {
            forcing: ForcingSpec::zero(),
            ..Scenario::default_scenario()
        };
        let rec = theorem4_errors(0.05, &s).unwrap();
        assert_eq!(rec.composite, 0.0);
    }

    #[test]
    fn ladder_validation() {
        assert!(matches!(
            validate_ladder(&[0.1]),
            Err(Error::DegenerateLadder(_))
        ));
        assert!(validate_ladder(&[0.1, 0.05, 0.05]).is_err());
        assert!(validate_ladder(&[0.1, 0.05, -0.01]).is_err());
        assert!(validate_ladder(&DEFAULT_LADDER).is_ok());
    }

    #[test]
    fn default_slopes_in_band() {
        let s = Scenario::default_scenario();
        for study in Study::ALL {
            let report = run_study(
                study,
                &DEFAULT_LADDER,
                &s,
                ExecPolicy::Parallel,
                DEFAULT_SLOPE_BAND,
            )
            .unwrap();
            let fit = report.fit.unwrap();
            assert_eq!(
                report.status,
                ReportStatus::Ok,
                "{study:?}: {fit:?} {:?}",
                report.layer_fit
            );
        }
    }
}
