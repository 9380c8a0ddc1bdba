use proptest::prelude::*;

use thinlayer::analytic::{solve_full_mode, RESIDUAL_TOLERANCE};
use thinlayer::geometry::mid_diffusion_split;
use thinlayer::radial::{apply_radial_operator, particular_radial};
use thinlayer::reduced::{mid_diffusion_residuals, solve_reduced_mode, solve_reduced_mode_direct};
use thinlayer::{CircleGeometry, ForcingSpec, ForcingTerm, FourierMode, MaterialParams};

/// Mid-diffusion triple: `alpha_delta` strictly between the other two.
fn mid_triple() -> impl Strategy<Value = MaterialParams> {
    (0.1f64..10.0, 0.1f64..10.0, 0.05f64..0.95).prop_filter_map("distinct", |(a, b, t)| {
        if (a - b).abs() < 0.05 * a.max(b) {
            return None;
        }
        MaterialParams::new(a, a + t * (b - a), b).ok()
    })
}

fn geometry() -> CircleGeometry {
    CircleGeometry::new(1.0, 2.0).unwrap()
}

proptest! {
    #[test]
    fn split_identities(params in mid_triple()) {
        let split = mid_diffusion_split(&params).unwrap();
        prop_assert!((split.p1() + split.p2() - 1.0).abs() <= 1e-13);
        prop_assert!(split.p1() > 0.0 && split.p2() > 0.0);
        prop_assert!(params.trace_jump_coefficient(split).abs() <= 1e-13);
        prop_assert!((params.flux_jump_coefficient(split) - params.kappa()).abs() <= 1e-13 * params.kappa().abs().max(1.0));
    }

    #[test]
    fn particular_reproduces_source(c in -10.0f64..10.0, m in 0u32..8, n in 0u32..12, alpha in 0.1f64..10.0) {
        prop_assume!(m + 2 != n);
        let term = ForcingTerm::new(c, m, FourierMode::cos(n)).unwrap();
        let p = particular_radial(&term, alpha).unwrap();
        prop_assert!((apply_radial_operator(p, n, alpha) - c).abs() <= 1e-12 * c.abs().max(1.0));
    }

    #[test]
    fn full_solver_residuals(params in mid_triple(), n in 0u32..12, delta in 1e-4f64..0.2, c in -5.0f64..5.0, m in 0u32..4) {
        prop_assume!(m + 2 != n);
        let mode = FourierMode::cos(n);
        let forcing = ForcingSpec::single(c, m, mode).unwrap();
        let split = mid_diffusion_split(&params).unwrap();
        let full = solve_full_mode(mode, delta, &params, &geometry(), split, &forcing).unwrap();
        prop_assert!(full.max_residual() <= RESIDUAL_TOLERANCE, "{:?}", full.residuals);
    }

    #[test]
    fn full_solver_is_linear(n in 0u32..8, delta in 1e-3f64..0.2, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0) {
        let params = MaterialParams::new(1.0, 2.0, 4.0).unwrap();
        let split = mid_diffusion_split(&params).unwrap();
        let mode = FourierMode::cos(n);
        let m1 = if n == 2 { 1 } else { 0 };
        let f1 = ForcingSpec::single(c1, m1, mode).unwrap();
        let m2 = if n == 5 { 4 } else { 3 };
        let f2 = ForcingSpec::single(c2, m2, mode).unwrap();
        let g = geometry();
        let a = solve_full_mode(mode, delta, &params, &g, split, &f1).unwrap();
        let b = solve_full_mode(mode, delta, &params, &g, split, &f2).unwrap();
        let ab = solve_full_mode(mode, delta, &params, &g, split, &f1.combined(&f2)).unwrap();
        for k in 0..4 {
            let sum = a.pieces[k].add_scaled(&b.pieces[k], 1.0);
            let diff = ab.pieces[k].add_scaled(&sum, -1.0).max_coefficient();
            prop_assert!(diff <= 1e-12 * sum.max_coefficient().max(1.0));
        }
    }

    #[test]
    fn reduced_routes_agree(params in mid_triple(), n in 0u32..12, delta in 1e-4f64..0.1, c in -5.0f64..5.0) {
        let mode = FourierMode::cos(n);
        let m = if n == 2 { 1 } else { 0 };
        let forcing = ForcingSpec::single(c, m, mode).unwrap();
        let g = geometry();
        let dtn = solve_reduced_mode(mode, delta, &params, &g, &forcing);
        let direct = solve_reduced_mode_direct(mode, delta, &params, &g, &forcing);
        match (dtn, direct) {
            (Ok(a), Ok(b)) => {
                let scale = a.solution.max_coefficient().max(1.0);
                prop_assert!(a.solution.add_scaled(&b.solution, -1.0).max_coefficient() <= 1e-12 * scale);
                prop_assert!(mid_diffusion_residuals(&a, &params, &g).iter().all(|r| *r <= RESIDUAL_TOLERANCE));
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "routes disagree on solvability: {:?} / {:?}", a.is_ok(), b.is_ok()),
        }
    }
}
