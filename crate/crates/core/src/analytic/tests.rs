use approx::assert_relative_eq;

use super::*;
use crate::geometry::mid_diffusion_split;

fn default_params() -> MaterialParams {
    MaterialParams::new(1.0, 2.0, 4.0).unwrap()
}

fn default_geometry() -> CircleGeometry {
    CircleGeometry::new(1.0, 2.0).unwrap()
}

fn f4() -> ForcingSpec {
    ForcingSpec::single(4.0, 0, FourierMode::cos(0)).unwrap()
}

fn mode2_forcing() -> ForcingSpec {
    ForcingSpec::single(1.0, 1, FourierMode::cos(2)).unwrap()
}

#[test]
fn full_uniform_is_classical_parabola() {
    let params = MaterialParams::uniform(1.0).unwrap();
    let geometry = CircleGeometry::new(0.5, 1.0).unwrap();
    for (delta, p1) in [(0.1, 0.5), (0.01, 0.3), (0.2, 0.8)] {
        let split = LayerSplit::from_p1(p1).unwrap();
        let sol =
            solve_full_mode(FourierMode::cos(0), delta, &params, &geometry, split, &f4()).unwrap();
        for k in 0..=40 {
            let r = k as f64 / 40.0;
            let u = sol.eval(r, Derivative::Value).unwrap();
            let du = sol.eval(r, Derivative::First).unwrap();
            assert!((u - (1.0 - r * r)).abs() < 1e-13, "r = {r}: {u}");
            assert!((du + 2.0 * r).abs() < 1e-12);
        }
    }
}

#[test]
fn full_zero_forcing_is_zero() {
    let split = mid_diffusion_split(&default_params()).unwrap();
    for n in [0, 3] {
        let sol = solve_full_mode(
            FourierMode::cos(n),
            0.05,
            &default_params(),
            &default_geometry(),
            split,
            &ForcingSpec::zero(),
        )
        .unwrap();
        for piece in &sol.pieces {
            assert_eq!(piece.max_coefficient(), 0.0);
        }
    }
}

#[test]
fn full_residuals_default_scenario() {
    let params = default_params();
    let split = mid_diffusion_split(&params).unwrap();
    let forcing = f4().combined(&mode2_forcing());
    for n in [0u32, 2, 5] {
        for delta in [0.1, 0.01, 1e-4] {
            let sol = solve_full_mode(
                FourierMode::cos(n),
                delta,
                &params,
                &default_geometry(),
                split,
                &forcing,
            )
            .unwrap();
            assert_eq!(sol.residuals.len(), 7);
            assert!(
                sol.max_residual() < RESIDUAL_TOLERANCE,
                "n={n} δ={delta}: {:?}",
                sol.residuals
            );
            // outer Dirichlet
            assert!(sol.eval(2.0, Derivative::Value).unwrap().abs() < 1e-12);
            assert!(sol.pieces[0].is_regular_at_origin());
        }
    }
}

#[test]
fn full_high_modes_small_delta() {
    let params = default_params();
    let split = mid_diffusion_split(&params).unwrap();
    for n in [8u32, 16, 32] {
        let forcing = ForcingSpec::single(1.0, 0, FourierMode::cos(n)).unwrap();
        let sol = solve_full_mode(
            FourierMode::cos(n),
            1e-4,
            &params,
            &default_geometry(),
            split,
            &forcing,
        )
        .unwrap();
        assert!(
            sol.max_residual() < RESIDUAL_TOLERANCE,
            "n = {n}: {:?}",
            sol.residuals
        );
    }
}

#[test]
fn full_out_of_domain() {
    let split = mid_diffusion_split(&default_params()).unwrap();
    let sol = solve_full_mode(
        FourierMode::cos(0),
        0.1,
        &default_params(),
        &default_geometry(),
        split,
        &f4(),
    )
    .unwrap();
    assert!(matches!(
        sol.eval(2.5, Derivative::Value),
        Err(Error::OutOfDomain { .. })
    ));
    assert!(sol.eval(-0.1, Derivative::Value).is_err());
}

#[test]
fn full_rejects_layer_that_does_not_fit() {
    let split = LayerSplit::from_p1(0.5).unwrap();
    let geometry = CircleGeometry::new(1.0, 1.05).unwrap();
    assert!(solve_full_mode(
        FourierMode::cos(0),
        0.2,
        &default_params(),
        &geometry,
        split,
        &f4()
    )
    .is_err());
}

#[test]
fn full_is_linear_in_forcing() {
    let params = default_params();
    let split = mid_diffusion_split(&params).unwrap();
    let mode = FourierMode::cos(0);
    let a = ForcingSpec::single(4.0, 0, mode).unwrap();
    let b = ForcingSpec::single(-1.5, 3, mode).unwrap();
    let solve = |f: &ForcingSpec| {
        solve_full_mode(mode, 0.03, &params, &default_geometry(), split, f).unwrap()
    };
    let (sa, sb, sab) = (solve(&a), solve(&b), solve(&a.combined(&b)));
    for k in 0..=20 {
        let r = 0.1 * k as f64;
        let sum = sa.eval(r, Derivative::Value).unwrap() + sb.eval(r, Derivative::Value).unwrap();
        assert!((sab.eval(r, Derivative::Value).unwrap() - sum).abs() < 1e-12);
    }
}

#[test]
fn u0_examples() {
    let geometry = CircleGeometry::new(0.5, 1.0).unwrap();
    let u0 = solve_u0_mode(
        FourierMode::cos(0),
        &MaterialParams::uniform(1.0).unwrap(),
        &geometry,
        &f4(),
    )
    .unwrap();
    for k in 0..=10 {
        let r = 0.1 * k as f64;
        assert!((u0.eval(r, Derivative::Value).unwrap() - (1.0 - r * r)).abs() < 1e-13);
    }

    let zero = solve_u0_mode(
        FourierMode::cos(2),
        &default_params(),
        &default_geometry(),
        &ForcingSpec::zero(),
    )
    .unwrap();
    assert_eq!(zero.max_coefficient(), 0.0);
}

#[test]
fn u0_transmission_conditions() {
    let params = default_params();
    let u0 = solve_u0_mode(
        FourierMode::cos(2),
        &params,
        &default_geometry(),
        &mode2_forcing(),
    )
    .unwrap();
    assert!((u0.inner_trace() - u0.outer_trace()).abs() < 1e-12);
    assert!(
        (params.alpha_i * u0.inner_normal_derivative()
            - params.alpha_e * u0.outer_normal_derivative())
        .abs()
            < 1e-12
    );
    assert!(u0.outer.value(2.0).abs() < 1e-12);
    assert!(u0.max_residual() < RESIDUAL_TOLERANCE);
}

#[test]
fn u1_examples() {
    let params = default_params();
    let split = mid_diffusion_split(&params).unwrap();
    let geometry = default_geometry();

    let zero_u0 = TwoRegionModeSolution::zero(FourierMode::cos(3), &geometry);
    let u1 = solve_u1_mode(FourierMode::cos(3), &params, &geometry, split, &zero_u0).unwrap();
    assert_eq!(u1.max_coefficient(), 0.0);

    let u0 = solve_u0_mode(FourierMode::cos(0), &params, &geometry, &f4()).unwrap();
    let u1 = solve_u1_mode(FourierMode::cos(0), &params, &geometry, split, &u0).unwrap();
    assert!(params.trace_jump_coefficient(split).abs() < 1e-15);
    assert!(u1.max_coefficient() < 1e-15);
}

#[test]
fn u1_jump_conditions() {
    let params = default_params();
    let geometry = default_geometry();
    // a generic split keeps both jumps active
    let split = LayerSplit::from_p1(0.45).unwrap();
    let mode = FourierMode::cos(2);
    let u0 = solve_u0_mode(mode, &params, &geometry, &mode2_forcing()).unwrap();
    let u1 = solve_u1_mode(mode, &params, &geometry, split, &u0).unwrap();
    let trace = params.trace_jump_coefficient(split) * u0.inner_normal_derivative();
    let flux = params.flux_jump_coefficient(split) * (-4.0) * u0.inner_trace();
    assert!(trace.abs() > 1e-3 && flux.abs() > 1e-3);
    assert!((u1.inner_trace() - u1.outer_trace() - trace).abs() < 1e-12);
    assert!(
        (params.alpha_i * u1.inner_normal_derivative()
            - params.alpha_e * u1.outer_normal_derivative()
            - flux)
            .abs()
            < 1e-12
    );
    assert!(u1.outer.value(2.0).abs() < 1e-12);
}

#[test]
fn u1_rejects_mismatched_mode() {
    let geometry = default_geometry();
    let u0 = TwoRegionModeSolution::zero(FourierMode::cos(2), &geometry);
    let split = LayerSplit::from_p1(0.5).unwrap();
    assert!(solve_u1_mode(
        FourierMode::cos(3),
        &default_params(),
        &geometry,
        split,
        &u0
    )
    .is_err());
}

#[test]
fn degenerate_materials_collapse() {
    let params = MaterialParams::uniform(1.7).unwrap();
    let geometry = default_geometry();
    let split = LayerSplit::from_p1(0.4).unwrap();
    let forcing = f4().combined(&mode2_forcing());
    for mode in [FourierMode::cos(0), FourierMode::cos(2)] {
        let u0 = solve_u0_mode(mode, &params, &geometry, &forcing).unwrap();
        let u1 = solve_u1_mode(mode, &params, &geometry, split, &u0).unwrap();
        assert!(u1.max_coefficient() < 1e-15);
        for delta in [0.1, 0.0125, 0.001] {
            let full = solve_full_mode(mode, delta, &params, &geometry, split, &forcing).unwrap();
            for k in 0..=40 {
                let r = 0.05 * k as f64;
                for order in [Derivative::Value, Derivative::First] {
                    let a = full.eval(r, order).unwrap();
                    let b = u0.eval(r, order).unwrap();
                    assert!((a - b).abs() < 1e-12, "{mode} δ={delta} r={r}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn profile_zero() {
    let geometry = default_geometry();
    let z = TwoRegionModeSolution::zero(FourierMode::cos(1), &geometry);
    let split = LayerSplit::from_p1(0.5).unwrap();
    for side in Side::BOTH {
        let p = layer_profile_order1(side, &default_params(), split, &z, &z);
        assert_eq!((p.intercept, p.slope), (0.0, 0.0));
    }
}

#[test]
fn profile_endpoints_and_flux_relations() {
    let params = default_params();
    let geometry = default_geometry();
    let mode = FourierMode::cos(2);
    for split in [
        mid_diffusion_split(&params).unwrap(),
        LayerSplit::from_p1(0.45).unwrap(),
    ] {
        let u0 = solve_u0_mode(mode, &params, &geometry, &mode2_forcing()).unwrap();
        let u1 = solve_u1_mode(mode, &params, &geometry, split, &u0).unwrap();
        let side1 = layer_profile_order1(Side::Inner, &params, split, &u0, &u1);
        let side2 = layer_profile_order1(Side::Outer, &params, split, &u0, &u1);

        // the two sides agree on Γ
        assert!((side1.value(0.0).unwrap() - side2.value(0.0).unwrap()).abs() < 1e-12);
        // flux relations in s
        assert_relative_eq!(
            params.alpha_delta * side1.derivative() / split.p1(),
            params.alpha_i * u0.inner_normal_derivative(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            params.alpha_delta * side2.derivative() / split.p2(),
            params.alpha_e * u0.outer_normal_derivative(),
            max_relative = 1e-13
        );
        // matching values at the layer boundaries
        let m1 = u1.inner_trace() - split.p1() * u0.inner_normal_derivative();
        assert!((side1.value(-1.0).unwrap() - m1).abs() < 1e-13);
        let m2 = u1.outer_trace() + split.p2() * u0.outer_normal_derivative();
        assert!((side2.value(1.0).unwrap() - m2).abs() < 1e-13);
        assert!(side1.value(0.5).is_err());
    }
}

#[test]
fn profile_with_equal_inner_conductivity() {
    // alpha_i = alpha_delta: side-1 slope ratio is one
    let params = MaterialParams::new(2.0, 2.0, 4.0).unwrap();
    let geometry = default_geometry();
    let split = LayerSplit::from_p1(0.5).unwrap();
    let mode = FourierMode::cos(2);
    let u0 = solve_u0_mode(mode, &params, &geometry, &mode2_forcing()).unwrap();
    let u1 = solve_u1_mode(mode, &params, &geometry, split, &u0).unwrap();
    let p = layer_profile_order1(Side::Inner, &params, split, &u0, &u1);
    let dn = u0.inner_normal_derivative();
    for s in [-1.0, -0.25, 0.0] {
        let expected = u1.inner_trace() + split.p1() * s * dn;
        assert!((p.value(s).unwrap() - expected).abs() < 1e-14);
    }
}

#[test]
fn profile_order0_is_trace() {
    let params = default_params();
    let u0 = solve_u0_mode(FourierMode::cos(0), &params, &default_geometry(), &f4()).unwrap();
    let p = layer_profile_order0(Side::Outer, &u0);
    assert_eq!(p.slope, 0.0);
    assert!((p.value(0.7).unwrap() - u0.inner_trace()).abs() < 1e-13);
}

#[test]
fn order1_matching_against_full_solution() {
    // u_{i,δ}(R - p1 δ) = u_{i,0|Γ} + δ (u_{i,1|Γ} - p1 ∂_n u_{i,0|Γ}) + O(δ²)
    let params = default_params();
    let geometry = default_geometry();
    let split = mid_diffusion_split(&params).unwrap();
    let mode = FourierMode::cos(2);
    let u0 = solve_u0_mode(mode, &params, &geometry, &mode2_forcing()).unwrap();
    let u1 = solve_u1_mode(mode, &params, &geometry, split, &u0).unwrap();
    let side1 = layer_profile_order1(Side::Inner, &params, split, &u0, &u1);
    let mut errs = Vec::new();
    for delta in [0.02, 0.01, 0.005] {
        let full =
            solve_full_mode(mode, delta, &params, &geometry, split, &mode2_forcing()).unwrap();
        let r1 = full.breaks[0];
        let approx = u0.inner_trace() + delta * side1.value(-1.0).unwrap();
        errs.push((full.pieces[0].value(r1) - approx).abs());
    }
    // second order: ratio ≈ 4 per halving
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 3.5 && ratio < 4.5, "{errs:?}");
    }
}
