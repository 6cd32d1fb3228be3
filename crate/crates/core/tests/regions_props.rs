use tripow::boundary::{triple_zero_point, CurveLabel, ParamCurve};
use tripow::io::{read_grid_json, write_grid_json};
use tripow::potential::{classify_existence, DEFAULT_ZERO_TOL};
use tripow::regions::*;
use tripow::stability::{j_with, QuadOptions};
use tripow::{CaseSigns, ExistenceClass, ModelParams};

fn j_at(case: CaseSigns, omega: f64, gamma: f64, rel_tol: f64) -> Option<f64> {
    let p = ModelParams::new(case, omega, gamma).ok()?;
    j_with(&p.coeffs(), &QuadOptions { rel_tol, ..Default::default() }).ok().map(|v| v.j)
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (x, y) = (a.0 + s * dx - p.0, a.1 + s * dy - p.1);
    (x * x + y * y).sqrt()
}

fn dist_to_curves(p: (f64, f64), curves: &[ParamCurve]) -> f64 {
    curves
        .iter()
        .flat_map(|c| c.points.windows(2).map(move |w| seg_dist(p, w[0], w[1])))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn level_curves_stable_under_refinement() {
    let coarse_w = Window::new((0.3, 0.8), (1.56, 1.62), 25, 30).unwrap();
    let fine_w = Window::new((0.3, 0.8), (1.56, 1.62), 49, 59).unwrap();
    let coarse = extract_level_curves(&sweep(CaseSigns::FF, &coarse_w), &[0.0]);
    let fine = extract_level_curves(&sweep(CaseSigns::FF, &fine_w), &[0.0]);
    assert!(!coarse.is_empty() && !fine.is_empty());
    let diag = coarse_w.d_omega().hypot(coarse_w.d_gamma());
    for c in &coarse {
        for &p in &c.points {
            assert!(dist_to_curves(p, &fine) < diag, "{p:?}");
        }
    }
}

#[test]
fn ff_zero_level_starts_at_triple_point() {
    let (w1, g1) = triple_zero_point();
    let w = Window::new((w1 + 1e-4, 1.6656), (1.55, 1.8), 60, 200).unwrap();
    let curves = extract_level_curves(&sweep(CaseSigns::FF, &w), &[0.0]);
    assert_eq!(curves.len(), 1);
    assert_eq!(curves[0].label, CurveLabel::LevelSet(0.0));
    let diag = w.d_omega().hypot(w.d_gamma());
    let start = curves[0].points.iter().min_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
    assert!((start.0 - w1).hypot(start.1 - g1) < 2.0 * diag, "{start:?}");
}

#[test]
fn w1_columns_decrease_where_j_is_moderate() {
    let (w1, _) = triple_zero_point();
    let w = Window::new((w1 + 1e-4, 1.6656), (1.55, 1.8), 60, 200).unwrap();
    let f = sweep(CaseSigns::FF, &w);
    for io in 0..w.n_omega {
        for ig in 0..w.n_gamma - 1 {
            if let (Some(a), Some(b)) = (f.at(io, ig), f.at(io, ig + 1)) {
                if a.abs() < 20.0 && b.abs() < 20.0 {
                    assert!(b < a, "column {io} row {ig}: {a} -> {b}");
                }
            }
        }
    }
}

#[test]
fn method_one_brackets_hold_on_reevaluation() {
    let w = &reduced_schedule()[0];
    let gammas = w.gamma_nodes();
    let (curve, columns) = trace_gamma_cr(CaseSigns::FF, &w.omega_nodes(), &gammas);
    assert!(!curve.points.is_empty());
    assert_eq!(curve.method, CrMethod::MeshBracket);
    for p in curve.points.iter().step_by(5) {
        let l = gammas.iter().position(|&g| g == p.gamma).unwrap();
        assert!(j_at(CaseSigns::FF, p.omega, gammas[l], 1e-12).unwrap() >= 0.0);
        assert!(j_at(CaseSigns::FF, p.omega, gammas[l + 1], 1e-12).unwrap() < 0.0);
        let cp = ModelParams::new(CaseSigns::FF, p.omega, p.gamma).unwrap();
        assert!(matches!(classify_existence(&cp, DEFAULT_ZERO_TOL), ExistenceClass::Exists { .. }));
    }
    assert!(columns.iter().all(|c| c.lower.len() <= 1));
}

#[test]
fn method_two_points_are_roots_inside_the_region() {
    let w = &reduced_schedule()[1];
    let (curve, _) = trace_gamma_cr(CaseSigns::FF, &w.omega_nodes(), &w.gamma_nodes());
    let opts = RefineOptions::default();
    for p in curve.points.iter().step_by(7) {
        let r = refine_root(CaseSigns::FF, (p.omega, p.gamma), &opts).unwrap();
        assert!(r.refined);
        let cp = ModelParams::new(CaseSigns::FF, r.omega, r.gamma).unwrap();
        assert!(classify_existence(&cp, DEFAULT_ZERO_TOL).exists());
        let v = j_with(&cp.coeffs(), &QuadOptions { rel_tol: 1e-13, ..Default::default() }).unwrap();
        assert!(v.j.abs() <= 1e-9 * v.scale, "{r:?}: {}", v.j);
        assert!((r.omega - p.omega).abs() <= 2.0 * w.d_omega() && (r.gamma - p.gamma).abs() <= 2.0 * w.d_gamma());
    }
}

fn column_root(omega: f64, lo: f64, hi: f64) -> f64 {
    let n = 400;
    let j = |g: f64| j_at(CaseSigns::FF, omega, g, 1e-12).unwrap();
    let step = (hi - lo) / n as f64;
    let l = (0..n).find(|&i| j(lo + i as f64 * step) >= 0.0 && j(lo + (i + 1) as f64 * step) < 0.0).unwrap();
    let (mut a, mut b) = (lo + l as f64 * step, lo + (l + 1) as f64 * step);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if j(m) >= 0.0 {
            a = m
        } else {
            b = m
        }
    }
    a
}

#[test]
fn critical_curve_leaves_triple_point_with_boundary_slope() {
    let (w1, g1) = triple_zero_point();
    let limit = -18.0 / 5.0;
    let mut errs = Vec::new();
    for s in [1e-3, 1e-4, 1e-5] {
        let g: Vec<f64> = (1..=5).map(|k| column_root(w1 + k as f64 * s, g1 - 250.0 * s, g1 + 10.0 * s)).collect();
        let slope = (g[4] - g[0]) / (4.0 * s);
        errs.push((slope - limit).abs() / limit.abs());
    }
    assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
    assert!(errs[2] < 0.1, "{errs:?}");
}

#[test]
fn fd_has_no_critical_curve() {
    let w = Window::new((0.01, 2.0), (-10.0, 10.0), 12, 40).unwrap();
    let (curve, columns) = trace_gamma_cr(CaseSigns::FD, &w.omega_nodes(), &w.gamma_nodes());
    assert!(curve.points.is_empty());
    assert!(columns.iter().all(|c| c.chosen().is_err()));
}

#[test]
fn df_critical_gamma_at_small_omega() {
    let gammas = linspace(-4.0, -3.6, 401);
    let (curve, _) = trace_gamma_cr(CaseSigns::DF, &[0.001], &gammas);
    assert!((curve.points[0].gamma + 3.83459).abs() < 2e-3, "{:?}", curve.points);
}

#[test]
fn grid_file_round_trip_gives_identical_contours() {
    let w = Window::new((0.001, 10.0), (-10.0, 10.0), 20, 20).unwrap().log_omega().unwrap();
    let field = sweep(CaseSigns::DF, &w);
    let mut buf = Vec::new();
    write_grid_json(&mut buf, &field).unwrap();
    let back = read_grid_json(buf.as_slice()).unwrap();
    assert_eq!(back, field);
    assert_eq!(extract_level_curves(&back, &[0.0, 0.5]), extract_level_curves(&field, &[0.0, 0.5]));
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let w = Window::new((0.05, 2.0), (-3.0, 3.0), 15, 15).unwrap();
    assert_eq!(sweep_with_threads(CaseSigns::FF, &w, 1), sweep_with_threads(CaseSigns::FF, &w, 4));
}
