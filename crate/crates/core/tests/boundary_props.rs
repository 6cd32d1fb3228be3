use proptest::prelude::*;
use tripow::boundary::*;
use tripow::potential::{classify_existence, DEFAULT_ZERO_TOL};
use tripow::{CaseSigns, ExistenceClass, ModelParams};

fn admissible_t() -> impl Strategy<Value = (CaseSigns, f64)> {
    prop_oneof![
        (0.05..ff_t_max() - 0.01).prop_map(|t| (CaseSigns::FF, t)),
        (0.05..5.0).prop_map(|t| (CaseSigns::FD, t)),
        (dd_t_min() + 0.01..5.0).prop_map(|t| (CaseSigns::DD, t)),
    ]
}

fn phi0(case: CaseSigns, omega: f64, gamma: f64) -> f64 {
    let p = ModelParams::new(case, omega, gamma).unwrap();
    classify_existence(&p, DEFAULT_ZERO_TOL).phi0().expect("wave exists")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn curve_points_classify_as_double_zeros((case, t) in admissible_t()) {
        let b = gamma_no_point(t, case).unwrap();
        let p = ModelParams::new(case, b.omega, b.gamma).unwrap();
        match classify_existence(&p, DEFAULT_ZERO_TOL) {
            ExistenceClass::BoundaryDoubleZero { t: found } => prop_assert!((found - t).abs() <= 1e-8, "{found} vs {t}"),
            other => prop_assert!(false, "{other:?} at t = {t}"),
        }
    }

    #[test]
    fn factorization_identity((case, t) in admissible_t()) {
        let b = gamma_no_point(t, case).unwrap();
        let c = ModelParams::new(case, b.omega, b.gamma).unwrap().coeffs();
        let a3 = case.a3();
        let x_max = 2.0 * b.x0.abs().max(t);
        let g = c.potential_poly();
        let scale = g.abs_scale(x_max);
        for i in 0..=400 {
            let x = x_max * i as f64 / 400.0;
            let fac = -(a3 / 5.0) * x * x * (x - t).powi(2) * (x - b.x0);
            prop_assert!((c.potential(x) - fac).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn curves_stay_on_their_side((case, t) in admissible_t()) {
        let b = gamma_no_point(t, case).unwrap();
        prop_assert!(b.omega > 0.0);
        if case == CaseSigns::DD {
            prop_assert!(b.gamma < dd_endpoint().1);
        }
    }
}

#[test]
fn phi0_jumps_across_ff_curve() {
    let t = 0.5;
    let b = gamma_no_point(t, CaseSigns::FF).unwrap();
    let (below, above) = phi0_limits_across(t, CaseSigns::FF).unwrap();
    let above = above.unwrap();
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for d in [1e-2, 1e-3, 1e-4] {
        let lo = (phi0(CaseSigns::FF, b.omega - d, b.gamma - d) - below).abs();
        let hi = (phi0(CaseSigns::FF, b.omega + d, b.gamma + d) - above).abs();
        assert!(lo < prev.0 && hi < prev.1, "delta {d}: {lo} {hi}");
        prev = (lo, hi);
    }
    assert!(prev.0 < 5e-2 && prev.1 < 5e-3, "{prev:?}");
}

#[test]
fn curve_stores_its_parameter() {
    let c = gamma_no_curve(CaseSigns::FD, 0.1, 2.0, 20).unwrap();
    let t = c.t.as_ref().unwrap();
    assert_eq!(t.len(), c.points.len());
    for (&t, &(o, g)) in t.iter().zip(&c.points) {
        let b = gamma_no_point(t, CaseSigns::FD).unwrap();
        assert_eq!((o, g), (b.omega, b.gamma));
    }
}

#[test]
fn curve_slope_is_minus_two_over_t_squared() {
    for (case, t) in [(CaseSigns::FF, 0.3), (CaseSigns::FF, 0.6), (CaseSigns::FD, 1.0), (CaseSigns::DD, 2.0)] {
        let c = gamma_no_curve(case, t - 1e-4, t + 1e-4, 2).unwrap();
        let (a, b) = (c.points[0], c.points[1]);
        let slope = (b.1 - a.1) / (b.0 - a.0);
        let want = -2.0 / (t * t);
        assert!((slope - want).abs() <= 1e-3 * want.abs(), "{case} t = {t}: {slope}");
    }
    let c = gamma_no_curve(CaseSigns::FD, 0.1, 4.0, 50).unwrap();
    assert!(c.points.windows(2).all(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) < 0.0));
}
