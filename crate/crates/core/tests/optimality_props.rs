use std::f64::consts::PI;

use pathgroup::geodesic::exp_point;
use pathgroup::group::GroupPoint;
use pathgroup::optimality::{
    a_fun, b_fun, conjugate_tau, cut_time, cut_time_at_point, f_det, in_cut_locus, jacobian_j2,
    jacobian_j3, jacobian_j4, phi0,
};
use pathgroup::symmetry::invariants_of;
use pathgroup::synthesis::f_y2_profile;
use pathgroup::trig::tan_fixed_point;
use pathgroup::verify::{fd_jacobian2, fd_jacobian3, random_frame};
use pathgroup::GeodesicParams;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn off_axis_alpha() -> impl Strategy<Value = f64> {
    (0.05..PI - 0.05, any::<bool>()).prop_map(|(a, flip)| if flip { a + PI } else { a })
}

proptest! {
    #[test]
    fn j3_matches_finite_differences(
        tau in 0.1..PI - 0.1, rho in 0.5..2.0f64, sigma in 0.1..2.0f64, alpha in 0.0..2.0 * PI,
    ) {
        let exact = jacobian_j3(tau, rho, sigma, alpha);
        let fd = fd_jacobian3(tau, rho, sigma, alpha);
        prop_assert!(exact < 0.0);
        prop_assert!(((fd - exact) / exact).abs() < 1e-5, "{} vs {}", fd, exact);
    }

    #[test]
    fn j2_matches_finite_differences(tau in 0.1..PI - 0.1, rho in 0.5..2.0f64, sigma in 0.1..2.0f64) {
        let exact = jacobian_j2(tau, rho, sigma);
        let fd = fd_jacobian2(tau, rho, sigma);
        prop_assert!(exact > 0.0);
        prop_assert!(((fd - exact) / exact).abs() < 1e-5, "{} vs {}", fd, exact);
    }

    #[test]
    fn analytic_functions_are_positive(tau in 1e-3..PI - 1e-3, alpha in 0.0..2.0 * PI, big in 1e-3..4.0 * PI) {
        prop_assert!(f_det(big, alpha) > 0.0);
        prop_assert!(a_fun(tau, alpha) > 0.0);
        prop_assert!(b_fun(tau, alpha) > 0.0);
        prop_assert!(jacobian_j4(tau, 1.0, 0.7, alpha) > 0.0);
    }

    #[test]
    fn conjugate_time_follows_cut_time(sigma in 0.01..10.0f64, alpha in off_axis_alpha()) {
        let t = conjugate_tau(sigma, alpha).unwrap();
        prop_assert!(PI < t && t < tan_fixed_point());
        // the Jacobian does not vanish before the conjugate time
        let g = |s: f64| a_fun(s, alpha) * sigma * sigma + b_fun(s, alpha);
        prop_assert!(g(0.5 * (PI + t)) > 0.0);
        prop_assert!(g(t + 1e-6 * (tan_fixed_point() - t)) < 0.0);
    }

    #[test]
    fn maxwell_symmetry(
        seed in any::<u64>(), rho in 0.5..3.0f64, sigma in 0.05..3.0f64, alpha in off_axis_alpha(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (k, kp) = random_frame(&mut rng, 3);
        let g1 = GeodesicParams::helix(alpha, rho, sigma, k.clone(), Some(kp.clone())).unwrap();
        let g2 = GeodesicParams::helix(-alpha, rho, sigma, k, Some(kp)).unwrap();
        let tc = cut_time(&g1);
        let i1 = invariants_of(&exp_point(&g1, tc));
        let i2 = invariants_of(&exp_point(&g2, tc));
        prop_assert!(i1.max_abs_diff(&i2) < 1e-9);
        prop_assert!(exp_point(&g1, tc / 2.0).max_abs_diff(&exp_point(&g2, tc / 2.0)) > 1e-3);
    }
}

#[test]
fn cut_points_have_no_shortcut() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let grid: Vec<f64> = (1..400).map(|i| PI * i as f64 / 400.0).collect();
    for _ in 0..100 {
        let (k, kp) = random_frame(&mut rng, 3);
        let alpha = rng.random_range(0.0..2.0 * PI);
        let g = GeodesicParams::helix(
            alpha,
            rng.random_range(0.5..2.0),
            rng.random_range(0.05..2.0),
            k,
            Some(kp),
        )
        .unwrap();
        let q = exp_point(&g, cut_time(&g));
        let mut q = q;
        q.x = 0.0;
        assert!(in_cut_locus(&q, 1e-9));
        for (tau, f) in f_y2_profile(&invariants_of(&q), &grid) {
            if let Some(f) = f {
                assert!(f > 0.0, "F = {f} at tau = {tau}");
            }
        }
        let t = cut_time_at_point(&q, 1e-9).unwrap();
        assert!((t - cut_time(&g)).abs() < 1e-9 * t);
    }
}

#[test]
fn phi0_matches_membership_sweeps() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..50 {
        let (ln, yn) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0));
        let p0 = phi0(ln, yn);
        assert!(p0 > 0.0 && p0 < PI / 2.0);
        for i in 1..200 {
            let phi = PI * i as f64 / 200.0;
            if (phi - p0).abs() < 1e-8 || (phi - PI + p0).abs() < 1e-8 {
                continue;
            }
            let q = GroupPoint::new(
                0.0,
                vec![ln, 0.0, 0.0],
                vec![yn * phi.cos(), 0.0, yn * phi.sin()],
            )
            .unwrap();
            assert_eq!(in_cut_locus(&q, 1e-12), (p0..=PI - p0).contains(&phi));
        }
    }
}
