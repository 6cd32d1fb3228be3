mod common;

use common::exists_in;
use proptest::prelude::*;
use tripow::profiles::*;
use tripow::{CaseSigns, ModelParams};

const BENCH: [(CaseSigns, f64, f64); 4] = [
    (CaseSigns::FF, 1.0, 1.7),
    (CaseSigns::DF, 1.0, -1.0),
    (CaseSigns::FD, 0.1, 0.5),
    (CaseSigns::DD, 0.5, -3.0),
];

struct Profiles {
    params: ModelParams,
    shoot: ProfileSolution,
    picard: ProfileSolution,
    bvp: ProfileSolution,
    quad: ProfileSolution,
}

fn all_methods(case: CaseSigns, omega: f64, gamma: f64) -> Profiles {
    let params = ModelParams::new(case, omega, gamma).unwrap();
    let shoot_p = crop(&shoot(&params, DEFAULT_T, DEFAULT_DT, 1e-12).unwrap());
    let coarse = crop(&shoot(&params, DEFAULT_T, 0.1, 1e-12).unwrap());
    let picard = picard_solve(&params, &coarse, 0.1, 50, 1e-12).unwrap();
    let quad = quadrature_profile(&params, DEFAULT_T, DEFAULT_DT, 4000).unwrap();
    let bvp = bvp_solve(&params, &shoot_p, DEFAULT_DT, 1e-12).unwrap();
    Profiles { params, shoot: shoot_p, picard, bvp, quad }
}

fn tail_slope(p: &ProfileSolution) -> f64 {
    let (a, b) = (0.6 * p.t_end(), 0.9 * p.t_end());
    let pts: Vec<(f64, f64)> =
        p.t.iter().zip(&p.phi).filter(|(t, _)| (a..=b).contains(*t)).map(|(&t, &v)| (t, v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn monotone(p: &ProfileSolution) -> bool {
    p.phi.windows(2).all(|w| w[1] <= w[0])
}

#[test]
fn methods_agree_at_benchmarks() {
    for (case, omega, gamma) in BENCH {
        let p = all_methods(case, omega, gamma);
        // Distances are taken over the nodes of the coarser profile.
        let pairs = [
            ("shoot-quad", p.shoot.sup_distance(&p.quad)),
            ("shoot-bvp", p.shoot.sup_distance(&p.bvp)),
            ("bvp-quad", p.bvp.sup_distance(&p.quad)),
            ("picard-shoot", p.picard.sup_distance(&p.shoot)),
            ("picard-bvp", p.picard.sup_distance(&p.bvp)),
            ("picard-quad", p.picard.sup_distance(&p.quad)),
        ];
        for (name, d) in pairs {
            assert!(d <= 1e-4, "{case} ({omega}, {gamma}) {name}: {d:e}");
        }
        assert!(p.bvp.sup_distance(&p.quad) <= 1e-6 || case != CaseSigns::FF);
    }
}

#[test]
fn energy_and_shape_at_benchmarks() {
    for (case, omega, gamma) in BENCH {
        let p = all_methods(case, omega, gamma);
        for s in [&p.quad, &p.bvp, &p.picard] {
            assert!(s.energy_residual <= 1e-4, "{case} {:?}: {:e}", s.method, s.energy_residual);
            assert!(monotone(s), "{case} {:?}", s.method);
            assert!(s.phi.iter().all(|&v| v >= 0.0));
            assert!(*s.phi.last().unwrap() < 1e-6);
        }
        assert!(p.quad.energy_residual <= 1e-8, "{case}: {:e}", p.quad.energy_residual);
        assert!((p.quad.phi[0] - p.quad.phi0).abs() <= 1e-12 * p.quad.phi0);
        assert!((p.bvp.phi[0] - p.bvp.phi0).abs() <= 1e-6 * p.bvp.phi0);
    }
}

#[test]
fn tails_decay_at_rate_sqrt_omega() {
    for (case, omega, gamma) in BENCH {
        let p = all_methods(case, omega, gamma);
        for s in [&p.quad, &p.bvp] {
            let slope = tail_slope(s);
            assert!((slope + omega.sqrt()).abs() <= 0.05 * omega.sqrt(), "{case} {:?}: {slope}", s.method);
        }
    }
}

#[test]
fn even_extension_solves_the_equation_at_the_peak() {
    for (case, omega, gamma) in BENCH {
        let p = all_methods(case, omega, gamma);
        let c = p.params.coeffs();
        let dt = p.bvp.dt();
        let lhs = 2.0 * (p.bvp.phi[1] - p.bvp.phi[0]) / (dt * dt);
        let g = c.field(p.bvp.phi[0]);
        assert!((lhs - g).abs() <= 1e-3 * g.abs(), "{case}: {lhs} vs {g}");
    }
}

#[test]
fn plateau_grows_near_the_jump() {
    let plateau = |omega: f64| {
        let p = ModelParams::new(CaseSigns::FF, omega, 1.8).unwrap();
        let s = crop(&shoot(&p, DEFAULT_T, DEFAULT_DT, 1e-12).unwrap());
        s.t.iter().zip(&s.phi).find(|(_, &v)| v < 0.5 * s.phi0).map(|(&t, _)| t).unwrap()
    };
    let below: Vec<f64> = [0.15, 0.16, 0.162].iter().map(|&w| plateau(w)).collect();
    let above: Vec<f64> = [0.2, 0.17, 0.164].iter().map(|&w| plateau(w)).collect();
    assert!(below.windows(2).all(|w| w[1] > w[0]), "{below:?}");
    assert!(above.windows(2).all(|w| w[1] > w[0]), "{above:?}");
}

#[test]
fn bvp_branches_on_both_sides_of_the_jump() {
    for (omega, lower) in [(0.15, true), (0.16, true), (0.17, false), (0.2, false)] {
        let p = ModelParams::new(CaseSigns::FF, omega, 1.8).unwrap();
        let q = quadrature_profile(&p, DEFAULT_T, DEFAULT_DT, 4000).unwrap();
        let b = bvp_solve(&p, &q, DEFAULT_DT, 1e-12).unwrap();
        assert!(monotone(&b));
        assert!(if lower { b.phi0 < 2.0 / 3.0 } else { b.phi0 > 11.0 / 12.0 }, "{omega}: {}", b.phi0);
        assert!(b.sup_distance(&q) < 1e-6);
    }
}

#[test]
fn picard_on_coarse_grids() {
    for omega in [0.2, 0.5, 1.0] {
        let p = ModelParams::new(CaseSigns::FF, omega, 1.7).unwrap();
        let u0 = crop(&shoot(&p, DEFAULT_T, 0.1, 1e-12).unwrap());
        let s = picard_solve(&p, &u0, 0.1, 50, 1e-12).unwrap();
        assert!(monotone(&s) && s.energy_residual <= 1e-4, "{omega}");
    }
    let p = ModelParams::new(CaseSigns::FF, 10.0, 10.0).unwrap();
    let u0 = crop(&shoot(&p, 5.0, 0.01, 1e-12).unwrap());
    let s = picard_solve(&p, &u0, 0.01, 50, 1e-12).unwrap();
    assert!(monotone(&s));
    assert!(s.value_at(2.0) < 1e-2 * s.phi0);
}

#[test]
fn mass_of_pure_cubic() {
    for (omega, want) in [(1.0, 4.0), (4.0, 8.0)] {
        let c = tripow::GeneralCoeffs::new(omega, 0.0, 1.0, 0.0);
        let q = quadrature_profile_coeffs(&c, 30.0, 0.001, 20000).unwrap();
        assert!((mass(&q) - want).abs() < 1e-8, "{}", mass(&q));
    }
}

#[test]
fn pure_cubic_quadrature_profile_is_sech() {
    let c = tripow::GeneralCoeffs::new(1.0, 0.0, 1.0, 0.0);
    let q = quadrature_profile_coeffs(&c, 30.0, 0.01, 4000).unwrap();
    for (&t, &v) in q.t.iter().zip(&q.phi) {
        assert!((v - 2f64.sqrt() / t.cosh()).abs() < 1e-8, "t = {t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn crop_is_idempotent((p, _) in exists_in(common::any_case(), (0.05, 5.0), (-5.0, 5.0))) {
        let raw = shoot(&p, 30.0, 0.05, 1e-10).unwrap();
        let once = crop(&raw);
        prop_assert_eq!(&crop_trajectory(&once, &p.coeffs()), &once);
        prop_assert!(once.phi.iter().all(|&v| v >= 0.0));
    }
}
