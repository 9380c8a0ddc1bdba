//! Exact per-mode solutions of the four-region problem and of the first two
//! terms of its asymptotic expansion, together with the in-layer profiles.

mod interface;
mod layer;

pub use interface::{Affine, InterfaceJump, LayeredProblem, Region};
pub use layer::{layer_profile_order0, layer_profile_order1, LayerFunction, LayerProfile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::geometry::{surface_laplacian_symbol, CircleGeometry, FourierMode, LayerSplit, Side};
use crate::materials::MaterialParams;
use crate::radial::{Derivative, RadialPiece};

/// Tolerance on the relative residual of every interface/boundary condition.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Regions of the full problem, from the centre outwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FullRegion {
    Inner,
    Layer(Side),
    Outer,
}

impl FullRegion {
    pub const ALL: [FullRegion; 4] = [
        FullRegion::Inner,
        FullRegion::Layer(Side::Inner),
        FullRegion::Layer(Side::Outer),
        FullRegion::Outer,
    ];

    fn index(self) -> usize {
        match self {
            FullRegion::Inner => 0,
            FullRegion::Layer(Side::Inner) => 1,
            FullRegion::Layer(Side::Outer) => 2,
            FullRegion::Outer => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FullRegion::Inner => "inner",
            FullRegion::Layer(Side::Inner) => "layer1",
            FullRegion::Layer(Side::Outer) => "layer2",
            FullRegion::Outer => "outer",
        }
    }
}

/// Evaluation of a per-mode radial factor on its region decomposition.
pub trait ModeSolution {
    /// Radial extent `[0, R_ext]`.
    fn domain(&self) -> (f64, f64);

    fn piece_at(&self, r: f64) -> &RadialPiece;

    /// Radial factor or its `r`-derivative at `r`. At a break radius the
    /// inner-side piece is used.
    fn eval(&self, r: f64, order: Derivative) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfDomain { r, lo, hi });
        }
        Ok(self.piece_at(r).eval(r, order))
    }
}

/// Evaluates any per-mode solution at `r`.
pub fn eval_mode_solution(solution: &dyn ModeSolution, r: f64, order: Derivative) -> Result<f64> {
    solution.eval(r, order)
}

/// Per-mode solution of the problem with the layer resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullModeSolution {
    pub mode: FourierMode,
    pub delta: f64,
    /// Inner, layer side 1, layer side 2, outer.
    pub pieces: [RadialPiece; 4],
    /// `R - p1·δ`, `R`, `R + p2·δ`, `R_ext`.
    pub breaks: [f64; 4],
    pub alphas: [f64; 4],
    /// Relative residuals of the seven conditions.
    pub residuals: Vec<f64>,
}

impl FullModeSolution {
    pub fn piece(&self, region: FullRegion) -> &RadialPiece {
        &self.pieces[region.index()]
    }

    /// Radial interval occupied by `region`.
    pub fn interval(&self, region: FullRegion) -> (f64, f64) {
        let k = region.index();
        let lo = if k == 0 { 0.0 } else { self.breaks[k - 1] };
        (lo, self.breaks[k])
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

impl ModeSolution for FullModeSolution {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.breaks[3])
    }

    fn piece_at(&self, r: f64) -> &RadialPiece {
        let k = self.breaks.iter().position(|&b| r <= b).unwrap_or(3);
        &self.pieces[k]
    }
}

/// Per-mode solution of a problem posed on the limit domains `r < R` and
/// `R < r < R_ext`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoRegionModeSolution {
    pub mode: FourierMode,
    pub inner: RadialPiece,
    pub outer: RadialPiece,
    pub r: f64,
    pub r_ext: f64,
    pub residuals: Vec<f64>,
}

impl TwoRegionModeSolution {
    pub fn zero(mode: FourierMode, geometry: &CircleGeometry) -> Self {
        let (r, r_ext) = (geometry.r(), geometry.r_ext());
        Self {
            mode,
            inner: RadialPiece::zero(mode.n, r, r),
            outer: RadialPiece::zero(mode.n, r_ext, r),
            r,
            r_ext,
            residuals: vec![0.0; 3],
        }
    }

    pub fn inner_trace(&self) -> f64 {
        self.inner.value(self.r)
    }

    pub fn outer_trace(&self) -> f64 {
        self.outer.value(self.r)
    }

    pub fn inner_normal_derivative(&self) -> f64 {
        self.inner.derivative(self.r)
    }

    pub fn outer_normal_derivative(&self) -> f64 {
        self.outer.derivative(self.r)
    }

    /// `self + factor·other`, region by region.
    pub fn add_scaled(&self, other: &TwoRegionModeSolution, factor: f64) -> TwoRegionModeSolution {
        assert_eq!(self.mode, other.mode);
        TwoRegionModeSolution {
            mode: self.mode,
            inner: self.inner.add_scaled(&other.inner, factor),
            outer: self.outer.add_scaled(&other.outer, factor),
            r: self.r,
            r_ext: self.r_ext,
            residuals: Vec::new(),
        }
    }

    pub fn max_coefficient(&self) -> f64 {
        self.inner
            .max_coefficient()
            .max(self.outer.max_coefficient())
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

impl ModeSolution for TwoRegionModeSolution {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.r_ext)
    }

    fn piece_at(&self, r: f64) -> &RadialPiece {
        if r <= self.r {
            &self.inner
        } else {
            &self.outer
        }
    }
}

/// Exact per-mode solution of the full problem with the layer split into
/// `[R - p1·δ, R]` and `[R, R + p2·δ]`.
pub fn solve_full_mode(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    split: LayerSplit,
    forcing: &ForcingSpec,
) -> Result<FullModeSolution> {
    mode.validate()?;
    params.validate()?;
    let (r1, r2) = geometry.layer_bounds(split, delta)?;
    let (r, r_ext) = (geometry.r(), geometry.r_ext());
    let alphas = [
        params.alpha_i,
        params.alpha_delta,
        params.alpha_delta,
        params.alpha_e,
    ];
    let problem = LayeredProblem {
        mode,
        regions: vec![
            Region::new(0.0, r1, alphas[0]),
            Region::new(r1, r, alphas[1]),
            Region::new(r, r2, alphas[2]),
            Region::new(r2, r_ext, alphas[3]),
        ],
        interfaces: vec![InterfaceJump::continuous(); 3],
        forcing: Some(forcing),
    };
    let pieces = problem.solve()?;
    let residuals = problem.residuals(&pieces);
    let [p0, p1, p2, p3]: [RadialPiece; 4] = pieces
        .try_into()
        .map_err(|_| Error::DegenerateGeometry("expected four regions".into()))?;
    Ok(FullModeSolution {
        mode,
        delta,
        pieces: [p0, p1, p2, p3],
        breaks: [r1, r, r2, r_ext],
        alphas,
        residuals,
    })
}

/// Solves a two-region problem on `[0, R]` and `[R, R_ext]`.
pub(crate) fn solve_two_region(
    mode: FourierMode,
    geometry: &CircleGeometry,
    inner: Region,
    outer: Region,
    jump: InterfaceJump,
    forcing: Option<&ForcingSpec>,
) -> Result<TwoRegionModeSolution> {
    mode.validate()?;
    let problem = LayeredProblem {
        mode,
        regions: vec![inner, outer],
        interfaces: vec![jump],
        forcing,
    };
    let mut pieces = problem.solve()?;
    let residuals = problem.residuals(&pieces);
    let outer = pieces.pop().expect("two regions");
    let inner = pieces.pop().expect("two regions");
    Ok(TwoRegionModeSolution {
        mode,
        inner,
        outer,
        r: geometry.r(),
        r_ext: geometry.r_ext(),
        residuals,
    })
}

pub(crate) fn limit_regions(
    params: &MaterialParams,
    geometry: &CircleGeometry,
) -> (Region, Region) {
    (
        Region::new(0.0, geometry.r(), params.alpha_i),
        Region::new(geometry.r(), geometry.r_ext(), params.alpha_e),
    )
}

/// Order-0 term: `-div(α₀∇u₀) = f` with continuous trace and flux on `Γ`.
pub fn solve_u0_mode(
    mode: FourierMode,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
) -> Result<TwoRegionModeSolution> {
    params.validate()?;
    let (inner, outer) = limit_regions(params, geometry);
    solve_two_region(
        mode,
        geometry,
        inner,
        outer,
        InterfaceJump::continuous(),
        Some(forcing),
    )
}

/// Order-1 term: harmonic in each region, with trace jump
/// `A·∂_n u_{i,0}` and flux jump `B·Δ_Γ u_{i,0}` on `Γ`.
pub fn solve_u1_mode(
    mode: FourierMode,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    split: LayerSplit,
    u0: &TwoRegionModeSolution,
) -> Result<TwoRegionModeSolution> {
    if u0.mode != mode {
        return Err(Error::InvalidMode(format!(
            "order-0 term is for mode {}, requested {mode}",
            u0.mode
        )));
    }
    let trace = params.trace_jump_coefficient(split) * u0.inner_normal_derivative();
    let flux = params.flux_jump_coefficient(split)
        * surface_laplacian_symbol(mode, geometry)
        * u0.inner_trace();
    let (inner, outer) = limit_regions(params, geometry);
    solve_two_region(
        mode,
        geometry,
        inner,
        outer,
        InterfaceJump {
            trace_jump: Affine::constant(trace),
            flux_jump: Affine::constant(flux),
        },
        None,
    )
}

#[cfg(test)]
mod tests;
