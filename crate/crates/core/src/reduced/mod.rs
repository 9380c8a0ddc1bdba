//! The approximate model: two bulk regions coupled on `Γ` by order-two
//! transmission conditions that replace the layer, solved either through the
//! per-mode Dirichlet-to-Neumann boundary equation or by direct elimination.

mod dtn;

pub use dtn::{
    boundary_symbol, dtn_exterior, dtn_interior, BoundarySymbol, DtNSymbol, RESONANCE_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::analytic::{
    limit_regions, solve_two_region, solve_u0_mode, Affine, InterfaceJump, LayerFunction,
    ModeSolution, Region, TwoRegionModeSolution,
};
use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::geometry::{surface_laplacian_symbol, CircleGeometry, FourierMode, LayerSplit, Side};
use crate::materials::MaterialParams;
use crate::radial::RadialPiece;

/// Solution of the approximate problem for one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedModeSolution {
    pub delta: f64,
    pub solution: TwoRegionModeSolution,
    /// Trace of the approximate solution on `Γ` (continuous across it).
    pub trace: f64,
    /// Trace of `U^ap - G` on `Γ`, the unknown of the boundary equation.
    pub omega: f64,
    pub symbol: Option<BoundarySymbol>,
}

impl ReducedModeSolution {
    pub fn mode(&self) -> FourierMode {
        self.solution.mode
    }

    pub fn inner(&self) -> &RadialPiece {
        &self.solution.inner
    }

    pub fn outer(&self) -> &RadialPiece {
        &self.solution.outer
    }
}

impl ModeSolution for ReducedModeSolution {
    fn domain(&self) -> (f64, f64) {
        self.solution.domain()
    }

    fn piece_at(&self, r: f64) -> &RadialPiece {
        self.solution.piece_at(r)
    }
}

/// Lift `G`: `-α_i ΔG = f` inside, `-α_e ΔG = f` outside, `G` and `∂_r G`
/// continuous on `Γ`, `G = 0` on the outer circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    pub solution: TwoRegionModeSolution,
}

impl Lift {
    /// Right-hand side of the boundary equation for this mode:
    /// `g = (α_e - α_i) ∂_n G|_Γ + δκ Δ_Γ G|_Γ`.
    pub fn boundary_data(
        &self,
        delta: f64,
        params: &MaterialParams,
        geometry: &CircleGeometry,
    ) -> f64 {
        let g = &self.solution;
        (params.alpha_e - params.alpha_i) * g.inner_normal_derivative()
            + delta * params.kappa() * surface_laplacian_symbol(g.mode, geometry) * g.inner_trace()
    }
}

pub fn lift_mode(
    mode: FourierMode,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
) -> Result<Lift> {
    params.validate()?;
    let inner = Region {
        flux_weight: 1.0,
        ..Region::new(0.0, geometry.r(), params.alpha_i)
    };
    let outer = Region {
        flux_weight: 1.0,
        ..Region::new(geometry.r(), geometry.r_ext(), params.alpha_e)
    };
    let solution = solve_two_region(
        mode,
        geometry,
        inner,
        outer,
        InterfaceJump::continuous(),
        Some(forcing),
    )?;
    Ok(Lift { solution })
}

/// Harmonic pieces with unit trace on `Γ`: the interior extension
/// `(r/R)^n` and the exterior one vanishing on the outer circle.
fn unit_harmonic_extensions(n: u32, geometry: &CircleGeometry) -> (RadialPiece, RadialPiece) {
    let (r, r_ext) = (geometry.r(), geometry.r_ext());
    let mut inner = RadialPiece::zero(n, r, r);
    inner.a = 1.0;
    let mut outer = RadialPiece::zero(n, r_ext, r);
    if n == 0 {
        outer.a = 1.0;
        outer.b = -1.0 / (r_ext / r).ln();
    } else {
        let q = (r / r_ext).powi(n as i32);
        outer.b = 1.0 / (1.0 - q * q);
        outer.a = -q * outer.b;
    }
    (inner, outer)
}

/// Approximate solution at the mid-diffusion split through the boundary
/// equation `(α_i S_i + α_e S_e - δκΔ_Γ) ω = g` on `Γ`.
pub fn solve_reduced_mode(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
) -> Result<ReducedModeSolution> {
    let symbol = boundary_symbol(mode, delta, params, geometry)?;
    symbol.require_nonresonant()?;
    let lift = lift_mode(mode, params, geometry, forcing)?;
    let omega = lift.boundary_data(delta, params, geometry) / symbol.value;

    let (psi_inner, psi_outer) = unit_harmonic_extensions(mode.n, geometry);
    let g = &lift.solution;
    let solution = TwoRegionModeSolution {
        mode,
        inner: g.inner.add_scaled(&psi_inner, omega),
        outer: g.outer.add_scaled(&psi_outer, omega),
        r: geometry.r(),
        r_ext: geometry.r_ext(),
        residuals: Vec::new(),
    };
    let solution = TwoRegionModeSolution {
        residuals: reduced_residuals(&solution, delta, params, geometry, 0.0, params.kappa()),
        ..solution
    };
    let trace = solution.inner_trace();
    Ok(ReducedModeSolution {
        delta,
        trace,
        omega,
        solution,
        symbol: Some(symbol),
    })
}

/// Coefficients of the general order-two conditions on `Γ`:
/// `u_i - u_e = δ·trace·∂_n u_i` and
/// `α_i ∂_n u_i - α_e ∂_n u_e = δ·flux·Δ_Γ u_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionCoefficients {
    pub trace: f64,
    pub flux: f64,
}

impl TransmissionCoefficients {
    /// Mid-diffusion split: no trace jump, flux coefficient `κ`.
    pub fn mid_diffusion(params: &MaterialParams) -> Result<Self> {
        params.require_mid_diffusion()?;
        Ok(Self {
            trace: 0.0,
            flux: params.kappa(),
        })
    }

    pub fn for_split(params: &MaterialParams, split: LayerSplit) -> Self {
        Self {
            trace: params.trace_jump_coefficient(split),
            flux: params.flux_jump_coefficient(split),
        }
    }
}

/// Whether conditions with a nonzero trace jump may be solved. Their
/// bilinear form is indefinite, so solvability is not guaranteed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnsafeModel {
    #[default]
    Refuse,
    Allow,
}

/// Approximate solution by direct elimination of the per-mode two-region
/// system at the mid-diffusion split.
pub fn solve_reduced_mode_direct(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
) -> Result<ReducedModeSolution> {
    let symbol = boundary_symbol(mode, delta, params, geometry)?;
    symbol.require_nonresonant()?;
    let coeffs = TransmissionCoefficients::mid_diffusion(params)?;
    let mut sol = solve_with_coefficients(mode, delta, params, geometry, forcing, coeffs)?;
    sol.symbol = Some(symbol);
    Ok(sol)
}

/// Direct solve of the general order-two conditions for an arbitrary split.
/// A nonzero trace-jump coefficient is refused unless `policy` allows it.
pub fn solve_general_reduced_mode(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    split: LayerSplit,
    forcing: &ForcingSpec,
    policy: UnsafeModel,
) -> Result<ReducedModeSolution> {
    let coeffs = TransmissionCoefficients::for_split(params, split);
    if coeffs.trace.abs() > 1e-13 && policy == UnsafeModel::Refuse {
        return Err(Error::UnsafeModel(format!(
            "split ({}, {}) leaves a trace-jump coefficient {:e}; existence is not guaranteed",
            split.p1(),
            split.p2(),
            coeffs.trace
        )));
    }
    solve_with_coefficients(mode, delta, params, geometry, forcing, coeffs)
}

fn solve_with_coefficients(
    mode: FourierMode,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
    coeffs: TransmissionCoefficients,
) -> Result<ReducedModeSolution> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "layer thickness must be nonnegative, got {delta}"
        )));
    }
    let (inner, outer) = limit_regions(params, geometry);
    let lap = surface_laplacian_symbol(mode, geometry);
    let jump = InterfaceJump {
        trace_jump: Affine {
            on_derivative: delta * coeffs.trace,
            ..Affine::default()
        },
        flux_jump: Affine {
            on_value: delta * coeffs.flux * lap,
            ..Affine::default()
        },
    };
    let solution = solve_two_region(mode, geometry, inner, outer, jump, Some(forcing)).map_err(
        |e| match e {
            Error::DegenerateGeometry(msg) => Error::SingularSystem(msg),
            other => other,
        },
    )?;
    let trace = solution.inner_trace();
    let lift = lift_mode(mode, params, geometry, forcing)?;
    let omega = trace - lift.solution.inner_trace();
    Ok(ReducedModeSolution {
        delta,
        trace,
        omega,
        solution,
        symbol: None,
    })
}

/// Relative residuals of the conditions
/// `u_i - u_e = δ t ∂_n u_i`, `α_i ∂_n u_i - α_e ∂_n u_e = δ f Δ_Γ u_i`,
/// `u_e(R_ext) = 0`.
fn reduced_residuals(
    sol: &TwoRegionModeSolution,
    delta: f64,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    trace_coeff: f64,
    flux_coeff: f64,
) -> Vec<f64> {
    let (ui, di) = sol.inner.value_and_derivative(geometry.r());
    let (ue, de) = sol.outer.value_and_derivative(geometry.r());
    let lap = surface_laplacian_symbol(sol.mode, geometry);
    let t_rhs = delta * trace_coeff * di;
    let q_rhs = delta * flux_coeff * lap * ui;
    let (fi, fe) = (params.alpha_i * di, params.alpha_e * de);
    vec![
        ((ui - ue) - t_rhs).abs() / (1.0 + ui.abs().max(ue.abs()).max(t_rhs.abs())),
        ((fi - fe) - q_rhs).abs() / (1.0 + fi.abs().max(fe.abs()).max(q_rhs.abs())),
        sol.outer.value(geometry.r_ext()).abs() / (1.0 + sol.outer.max_coefficient()),
    ]
}

/// Relative residuals of a reduced solution against the mid-diffusion
/// conditions.
pub fn mid_diffusion_residuals(
    sol: &ReducedModeSolution,
    params: &MaterialParams,
    geometry: &CircleGeometry,
) -> Vec<f64> {
    reduced_residuals(
        &sol.solution,
        sol.delta,
        params,
        geometry,
        0.0,
        params.kappa(),
    )
}

/// Reconstruction of the layer from the approximate solution:
///
/// ```text
/// side 1: u_i|Γ + δ p1 [(s+1) α_i/α_δ - 1] ∂_n u_i|Γ
/// side 2: u_e|Γ + δ p2 [(s-1) α_e/α_δ + 1] ∂_n u_e|Γ
/// ```
pub fn reconstruct_layer_ap(
    side: Side,
    delta: f64,
    params: &MaterialParams,
    split: LayerSplit,
    reduced: &ReducedModeSolution,
) -> LayerFunction {
    let sol = &reduced.solution;
    let (intercept, slope) = match side {
        Side::Inner => {
            let ratio = params.alpha_i / params.alpha_delta;
            let dn = sol.inner_normal_derivative();
            (
                sol.inner_trace() + delta * split.p1() * (ratio - 1.0) * dn,
                delta * split.p1() * ratio * dn,
            )
        }
        Side::Outer => {
            let ratio = params.alpha_e / params.alpha_delta;
            let dn = sol.outer_normal_derivative();
            (
                sol.outer_trace() + delta * split.p2() * (1.0 - ratio) * dn,
                delta * split.p2() * ratio * dn,
            )
        }
    };
    LayerFunction {
        side,
        r: sol.r,
        thickness: split.fraction(side) * delta,
        intercept,
        slope,
    }
}

/// Term `w_j` of the expansion of the approximate solution in powers of `δ`:
/// `w_0` solves the order-0 problem, `w_j` (j ≥ 1) is harmonic with
/// continuous trace and flux jump `κ Δ_Γ w_{j-1}|Γ`.
pub fn solve_w_recurrence(
    j: u32,
    mode: FourierMode,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
    previous: Option<&TwoRegionModeSolution>,
) -> Result<TwoRegionModeSolution> {
    if j > 2 {
        return Err(Error::InvalidMode(format!(
            "w-recurrence supports j ≤ 2, got {j}"
        )));
    }
    if j == 0 {
        return solve_u0_mode(mode, params, geometry, forcing);
    }
    let prev = previous
        .ok_or_else(|| Error::InvalidMode(format!("w_{j} needs w_{} for mode {mode}", j - 1)))?;
    if prev.mode != mode {
        return Err(Error::InvalidMode(format!(
            "previous term is for mode {}, requested {mode}",
            prev.mode
        )));
    }
    let flux = params.kappa() * surface_laplacian_symbol(mode, geometry) * prev.inner_trace();
    let (inner, outer) = limit_regions(params, geometry);
    solve_two_region(
        mode,
        geometry,
        inner,
        outer,
        InterfaceJump {
            trace_jump: Affine::default(),
            flux_jump: Affine::constant(flux),
        },
        None,
    )
}

/// `[w_0, …, w_{count-1}]` for one mode.
pub fn w_expansion(
    count: u32,
    mode: FourierMode,
    params: &MaterialParams,
    geometry: &CircleGeometry,
    forcing: &ForcingSpec,
) -> Result<Vec<TwoRegionModeSolution>> {
    let mut terms: Vec<TwoRegionModeSolution> = Vec::with_capacity(count as usize);
    for j in 0..count {
        let w = solve_w_recurrence(j, mode, params, geometry, forcing, terms.last())?;
        terms.push(w);
    }
    Ok(terms)
}

/// `Σ_j δ^j w_j`.
pub fn sum_expansion(terms: &[TwoRegionModeSolution], delta: f64) -> Option<TwoRegionModeSolution> {
    let (first, rest) = terms.split_first()?;
    let mut acc = first.clone();
    let mut weight = 1.0;
    for term in rest {
        weight *= delta;
        acc = acc.add_scaled(term, weight);
    }
    Some(acc)
}
