//! Second-order finite-volume discretisation of the radial mode equation
//! `-(1/r)(r k u')' + k n² u / r² = (k/α) f` on a stack of regions, used as an
//! independent check of the closed-form solvers.
//!
//! Every break radius is a grid node. Interface nodes carry the outer-side
//! value as unknown; the inner-side value is that plus the prescribed trace
//! jump. The two half cells around an interface node are summed so the
//! prescribed flux jump enters the right-hand side.

use serde::{Deserialize, Serialize};

use crate::analytic::{
    limit_regions, solve_full_mode, solve_two_region, FullModeSolution, InterfaceJump, Region,
    TwoRegionModeSolution,
};
use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::geometry::{CircleGeometry, FourierMode, LayerSplit};
use crate::linalg::Tridiagonal;
use crate::materials::MaterialParams;
use crate::radial::RadialPiece;

pub const MIN_CELLS: usize = 8;

/// Cell counts per region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialGrid {
    pub cells: Vec<usize>,
}

impl RadialGrid {
    /// `max(MIN_CELLS, ceil(width/h))` cells in every region.
    pub fn for_regions(regions: &[Region], h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "grid spacing must be positive, got {h}"
            )));
        }
        Ok(Self {
            cells: regions
                .iter()
                .map(|r| (((r.hi - r.lo) / h).ceil() as usize).max(MIN_CELLS))
                .collect(),
        })
    }

    /// Halves every cell.
    pub fn refined(&self) -> Self {
        Self {
            cells: self.cells.iter().map(|c| 2 * c).collect(),
        }
    }
}

/// A radial problem for the oracle: regions, constant jumps at each internal
/// break, optional forcing.
#[derive(Debug, Clone)]
pub struct FdProblem<'a> {
    pub mode: FourierMode,
    pub regions: Vec<Region>,
    /// `(trace jump, flux jump)` per internal break, inner minus outer.
    pub jumps: Vec<(f64, f64)>,
    pub forcing: Option<&'a ForcingSpec>,
}

/// Nodal values region by region; interface nodes appear in both adjacent
/// regions with their one-sided values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub regions: Vec<Vec<(f64, f64)>>,
}

impl GridSolution {
    /// Largest nodal deviation from closed-form pieces (one per region).
    pub fn max_error(&self, pieces: &[RadialPiece]) -> f64 {
        self.regions
            .iter()
            .zip(pieces)
            .flat_map(|(nodes, piece)| nodes.iter().map(move |&(r, u)| (u - piece.value(r)).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.regions
            .iter()
            .flatten()
            .map(|(_, u)| u.abs())
            .fold(0.0, f64::max)
    }
}

impl FdProblem<'_> {
    fn source(&self, r: f64) -> f64 {
        self.forcing
            .map(|f| f.radial_value(self.mode, r))
            .unwrap_or(0.0)
    }

    /// `∫_0^ρ f r dr` for the centre cell.
    fn centre_source(&self, rho: f64) -> f64 {
        self.forcing
            .map(|f| {
                f.terms_for(self.mode)
                    .map(|t| {
                        let p = t.power as f64 + 2.0;
                        t.coefficient * rho.powf(p) / p
                    })
                    .sum()
            })
            .unwrap_or(0.0)
    }

    pub fn solve(&self, grid: &RadialGrid) -> Result<GridSolution> {
        if self.regions.is_empty()
            || self.jumps.len() + 1 != self.regions.len()
            || grid.cells.len() != self.regions.len()
        {
            return Err(Error::DegenerateGeometry(
                "grid does not match the regions".into(),
            ));
        }
        if self.regions[0].lo != 0.0 {
            return Err(Error::DegenerateGeometry(
                "first region must start at the origin".into(),
            ));
        }
        if let Some(&c) = grid.cells.iter().find(|&&c| c < MIN_CELLS) {
            return Err(Error::InvalidGeometry(format!(
                "need at least {MIN_CELLS} cells per region, got {c}"
            )));
        }

        // global nodes, region of each node and spacing
        let mut radii = vec![0.0];
        let mut starts = Vec::with_capacity(self.regions.len());
        let mut steps = Vec::with_capacity(self.regions.len());
        for (reg, &cells) in self.regions.iter().zip(&grid.cells) {
            starts.push(radii.len() - 1);
            let h = (reg.hi - reg.lo) / cells as f64;
            steps.push(h);
            for i in 1..=cells {
                radii.push(if i == cells {
                    reg.hi
                } else {
                    reg.lo + h * i as f64
                });
            }
        }
        let last = radii.len() - 1;
        let n = self.mode.n;
        let n2 = (n as f64) * (n as f64);
        let first_unknown = if n == 0 { 0 } else { 1 };
        // interface index of a node, if any
        let interface_at = |j: usize| -> Option<usize> {
            (1..self.regions.len())
                .find(|&k| starts[k] == j)
                .map(|k| k - 1)
        };
        let region_of = |j: usize| -> usize {
            (0..self.regions.len())
                .rev()
                .find(|&k| starts[k] < j || (k == 0))
                .unwrap_or(0)
        };

        let mut system = Tridiagonal::with_capacity(last);
        for j in first_unknown..last {
            let r = radii[j];
            if j == 0 {
                // centre cell [0, h/2], n = 0 only
                let reg = &self.regions[0];
                let h = steps[0];
                let k = reg.flux_weight;
                let c = k * (0.5 * h) / h;
                system.push_row(0.0, c, -c, k / reg.alpha * self.centre_source(0.5 * h));
                continue;
            }
            if let Some(iface) = interface_at(j) {
                let (ra, rb) = (&self.regions[iface], &self.regions[iface + 1]);
                let (ha, hb) = (steps[iface], steps[iface + 1]);
                let (ka, kb) = (ra.flux_weight, rb.flux_weight);
                let (jump, flux) = self.jumps[iface];
                let left = ka * (r - 0.5 * ha) / ha;
                let right = kb * (r + 0.5 * hb) / hb;
                let react_a = n2 * ka * ha / (2.0 * r);
                let react_b = n2 * kb * hb / (2.0 * r);
                let src = ka / ra.alpha * self.source(r - 0.25 * ha) * (r - 0.25 * ha) * 0.5 * ha
                    + kb / rb.alpha * self.source(r + 0.25 * hb) * (r + 0.25 * hb) * 0.5 * hb;
                system.push_row(
                    -left,
                    left + right + react_a + react_b,
                    -right,
                    src + r * flux - (left + react_a) * jump,
                );
                continue;
            }
            let k_reg = region_of(j);
            let reg = &self.regions[k_reg];
            let h = steps[k_reg];
            let k = reg.flux_weight;
            let lower = k * (r - 0.5 * h) / h;
            let upper = k * (r + 0.5 * h) / h;
            let mut rhs = k / reg.alpha * self.source(r) * r * h;
            // right neighbour is an interface seen from its inner side
            if let Some(iface) = interface_at(j + 1) {
                rhs += upper * self.jumps[iface].0;
            }
            system.push_row(-lower, lower + upper + n2 * k * h / r, -upper, rhs);
        }
        let values = system.solve()?;
        let value_at = |j: usize| -> f64 {
            if j == last || (j == 0 && n != 0) {
                0.0
            } else {
                values[j - first_unknown]
            }
        };

        let mut regions = Vec::with_capacity(self.regions.len());
        for (k, &cells) in grid.cells.iter().enumerate() {
            let start = starts[k];
            let mut nodes = Vec::with_capacity(cells + 1);
            for j in start..=start + cells {
                let mut u = value_at(j);
                // inner-side value at the region's upper interface
                if j == start + cells && k + 1 < self.regions.len() {
                    u += self.jumps[k].0;
                }
                nodes.push((radii[j], u));
            }
            regions.push(nodes);
        }
        Ok(GridSolution { regions })
    }
}

/// Problem families the oracle is run on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OracleConfiguration {
    /// Four regions with the layer resolved.
    Full { delta: f64 },
    /// Limit problem: two regions, continuous trace and flux.
    TwoRegion,
    /// Homogeneous two-region problem with the order-1 jumps computed from
    /// the order-0 term.
    JumpProblem,
}

impl OracleConfiguration {
    pub fn label(&self) -> &'static str {
        match self {
            OracleConfiguration::Full { .. } => "full",
            OracleConfiguration::TwoRegion => "two-region",
            OracleConfiguration::JumpProblem => "jump-problem",
        }
    }
}

/// Closed-form reference for an oracle configuration.
pub enum AnalyticReference {
    Full(FullModeSolution),
    TwoRegion(TwoRegionModeSolution),
}

impl AnalyticReference {
    pub fn pieces(&self) -> Vec<RadialPiece> {
        match self {
            AnalyticReference::Full(s) => s.pieces.to_vec(),
            AnalyticReference::TwoRegion(s) => vec![s.inner.clone(), s.outer.clone()],
        }
    }
}

/// Everything needed to run the oracle for one configuration and mode.
pub struct OracleCase<'a> {
    pub problem: FdProblem<'a>,
    pub reference: AnalyticReference,
}

pub fn oracle_case<'a>(
    mode: FourierMode,
    configuration: OracleConfiguration,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    split: LayerSplit,
    forcing: &'a ForcingSpec,
) -> Result<OracleCase<'a>> {
    match configuration {
        OracleConfiguration::Full { delta } => {
            let full = solve_full_mode(mode, delta, params, geometry, split, forcing)?;
            let regions = (0..4)
                .map(|k| {
                    let lo = if k == 0 { 0.0 } else { full.breaks[k - 1] };
                    Region::new(lo, full.breaks[k], full.alphas[k])
                })
                .collect();
            Ok(OracleCase {
                problem: FdProblem {
                    mode,
                    regions,
                    jumps: vec![(0.0, 0.0); 3],
                    forcing: Some(forcing),
                },
                reference: AnalyticReference::Full(full),
            })
        }
        OracleConfiguration::TwoRegion => {
            let (inner, outer) = limit_regions(params, geometry);
            let sol = solve_two_region(
                mode,
                geometry,
                inner,
                outer,
                InterfaceJump::continuous(),
                Some(forcing),
            )?;
            Ok(OracleCase {
                problem: FdProblem {
                    mode,
                    regions: vec![inner, outer],
                    jumps: vec![(0.0, 0.0)],
                    forcing: Some(forcing),
                },
                reference: AnalyticReference::TwoRegion(sol),
            })
        }
        OracleConfiguration::JumpProblem => {
            let u0 = crate::analytic::solve_u0_mode(mode, params, geometry, forcing)?;
            let u1 = crate::analytic::solve_u1_mode(mode, params, geometry, split, &u0)?;
            let trace = params.trace_jump_coefficient(split) * u0.inner_normal_derivative();
            let flux = params.flux_jump_coefficient(split)
                * crate::geometry::surface_laplacian_symbol(mode, geometry)
                * u0.inner_trace();
            let (inner, outer) = limit_regions(params, geometry);
            Ok(OracleCase {
                problem: FdProblem {
                    mode,
                    regions: vec![inner, outer],
                    jumps: vec![(trace, flux)],
                    forcing: None,
                },
                reference: AnalyticReference::TwoRegion(u1),
            })
        }
    }
}

/// Solves the oracle problem on a grid with spacing about `h`.
pub fn fd_oracle_solve(case: &OracleCase<'_>, h: f64) -> Result<GridSolution> {
    let grid = RadialGrid::for_regions(&case.problem.regions, h)?;
    case.problem.solve(&grid)
}

/// One refinement level of an oracle ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub h: f64,
    pub max_error: f64,
}

/// Solves on `levels` successively halved grids, starting from spacing `h0`,
/// and records the max-norm deviation from the closed-form reference.
pub fn oracle_ladder(case: &OracleCase<'_>, h0: f64, levels: usize) -> Result<Vec<OracleLevel>> {
    let mut grid = RadialGrid::for_regions(&case.problem.regions, h0)?;
    let pieces = case.reference.pieces();
    let mut out = Vec::with_capacity(levels);
    let mut h = h0;
    for _ in 0..levels {
        let sol = case.problem.solve(&grid)?;
        out.push(OracleLevel {
            h,
            max_error: sol.max_error(&pieces),
        });
        grid = grid.refined();
        h *= 0.5;
    }
    Ok(out)
}

/// Errors below this (relative to the solution size) count as exact.
pub const ORACLE_EXACT_TOLERANCE: f64 = 1e-11;
pub const EXPECTED_ORDER: f64 = 2.0;
pub const DEFAULT_ORDER_BAND: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    Ok,
    OutOfBand,
    /// The scheme reproduces the closed form to roundoff on every grid.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub configuration: OracleConfiguration,
    pub mode: FourierMode,
    pub levels: Vec<OracleLevel>,
    pub observed_order: Option<f64>,
    pub status: OracleStatus,
}

/// Runs the ladder and fits the observed order.
pub fn oracle_report(
    mode: FourierMode,
    configuration: OracleConfiguration,
    scenario: &crate::verification::Scenario,
    h0: f64,
    levels: usize,
    band: f64,
) -> Result<OracleReport> {
    let case = oracle_case(
        mode,
        configuration,
        &scenario.params,
        &scenario.geometry,
        scenario.split,
        &scenario.forcing,
    )?;
    let ladder = oracle_ladder(&case, h0, levels)?;
    let size = case
        .reference
        .pieces()
        .iter()
        .map(RadialPiece::max_coefficient)
        .fold(1.0, f64::max);
    if ladder
        .iter()
        .all(|l| l.max_error <= ORACLE_EXACT_TOLERANCE * size)
    {
        return Ok(OracleReport {
            configuration,
            mode,
            levels: ladder,
            observed_order: None,
            status: OracleStatus::Exact,
        });
    }
    let pairs: Vec<_> = ladder.iter().map(|l| (l.h, l.max_error)).collect();
    let fit = crate::verification::fit_slope(&pairs)?;
    Ok(OracleReport {
        configuration,
        mode,
        levels: ladder,
        observed_order: Some(fit.slope),
        status: if (fit.slope - EXPECTED_ORDER).abs() <= band {
            OracleStatus::Ok
        } else {
            OracleStatus::OutOfBand
        },
    })
}


#[cfg(test)]
mod report_tests {
    use super::*;
    use crate::verification::Scenario;

    #[test]
    fn default_scenario_reports() {
        let s = Scenario::default_scenario();
        for configuration in [
            OracleConfiguration::Full { delta: 0.05 },
            OracleConfiguration::TwoRegion,
            OracleConfiguration::JumpProblem,
        ] {
            let r0 =
                oracle_report(FourierMode::cos(0), configuration, &s, 1.0 / 16.0, 4, 0.2).unwrap();
            assert_eq!(r0.status, OracleStatus::Exact, "{r0:?}");
            let r2 =
                oracle_report(FourierMode::cos(2), configuration, &s, 1.0 / 16.0, 4, 0.2).unwrap();
            assert_eq!(r2.status, OracleStatus::Ok, "{r2:?}");
        }
    }
}
