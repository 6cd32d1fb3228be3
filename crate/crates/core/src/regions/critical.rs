//! The critical curve `J = 0` and its lowest point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ScalarField, Window};
use crate::error::{Error, Result};
use crate::potential::{CaseSigns, ModelParams};
use crate::stability::{j_with, QuadOptions, StabilityValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrMethod {
    MeshBracket,
    RootRefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrPoint {
    pub omega: f64,
    pub gamma: f64,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrCurve {
    pub points: Vec<CrPoint>,
    pub method: CrMethod,
}

/// Sign changes `J(gamma_l) >= 0 > J(gamma_{l+1})` found in one column,
/// listed by their lower node `gamma_l` from bottom to top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnBrackets {
    pub omega: f64,
    pub lower: Vec<f64>,
}

impl ColumnBrackets {
    /// The bracket used for the curve: the topmost one.
    pub fn chosen(&self) -> Result<f64> {
        self.lower.last().copied().ok_or(Error::NoSignChange { omega: self.omega })
    }
}

fn brackets_in(omega: f64, gammas: &[f64], js: &[Option<f64>]) -> ColumnBrackets {
    let lower = (0..gammas.len().saturating_sub(1))
        .filter(|&l| matches!((js[l], js[l + 1]), (Some(a), Some(b)) if a >= 0.0 && b < 0.0))
        .map(|l| gammas[l])
        .collect();
    ColumnBrackets { omega, lower }
}

fn curve_from(columns: &[ColumnBrackets]) -> CrCurve {
    CrCurve {
        points: columns
            .iter()
            .filter_map(|c| c.chosen().ok().map(|gamma| CrPoint { omega: c.omega, gamma, refined: false }))
            .collect(),
        method: CrMethod::MeshBracket,
    }
}

fn j_at(case: CaseSigns, omega: f64, gamma: f64, opts: &QuadOptions) -> Result<StabilityValue> {
    j_with(&ModelParams::new(case, omega, gamma)?.coeffs(), opts)
}

/// Scans each column `omega_k` upward through `gamma_nodes` and records
/// every sign change of `J` from non-negative to negative. Columns without
/// one are kept with an empty bracket list.
pub fn trace_gamma_cr(case: CaseSigns, omega_samples: &[f64], gamma_nodes: &[f64]) -> (CrCurve, Vec<ColumnBrackets>) {
    let opts = QuadOptions::default();
    let columns: Vec<ColumnBrackets> = omega_samples
        .par_iter()
        .map(|&omega| {
            let js: Vec<Option<f64>> =
                gamma_nodes.iter().map(|&g| j_at(case, omega, g, &opts).ok().map(|v| v.j)).collect();
            brackets_in(omega, gamma_nodes, &js)
        })
        .collect();
    (curve_from(&columns), columns)
}

/// [`trace_gamma_cr`] on an already swept field.
pub fn trace_gamma_cr_field(field: &ScalarField) -> (CrCurve, Vec<ColumnBrackets>) {
    let w = &field.window;
    let gammas = w.gamma_nodes();
    let columns: Vec<ColumnBrackets> = w
        .omega_nodes()
        .iter()
        .enumerate()
        .map(|(i, &omega)| {
            let js: Vec<Option<f64>> = (0..w.n_gamma).map(|l| field.at(i, l)).collect();
            brackets_in(omega, &gammas, &js)
        })
        .collect();
    (curve_from(&columns), columns)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    /// Stop when `|J| <= tol * scale`.
    pub tol: f64,
    pub max_iter: usize,
    pub quad: QuadOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-11,
            max_iter: 50,
            quad: QuadOptions { rel_tol: 1e-13, ..QuadOptions::default() },
        }
    }
}

/// Levenberg iteration for `J(omega, gamma) = 0` in both variables, started
/// at `seed`. The 1x2 Jacobian comes from central differences.
pub fn refine_root(case: CaseSigns, seed: (f64, f64), opts: &RefineOptions) -> Result<CrPoint> {
    let eval = |x: (f64, f64)| j_at(case, x.0, x.1, &opts.quad);
    let mut x = seed;
    let mut v = eval(x)?;
    let mut lambda = 0.0;
    let mut trace = vec![v.j.abs()];
    for _ in 0..opts.max_iter {
        if v.j.abs() <= opts.tol * v.scale {
            return Ok(CrPoint { omega: x.0, gamma: x.1, refined: true });
        }
        let h = (1e-6 * x.0, 1e-6 * x.1.abs().max(1.0));
        let d = |a: (f64, f64), b: (f64, f64), h: f64| -> Result<f64> { Ok((eval(a)?.j - eval(b)?.j) / (2.0 * h)) };
        let g = (
            d((x.0 + h.0, x.1), (x.0 - h.0, x.1), h.0)?,
            d((x.0, x.1 + h.1), (x.0, x.1 - h.1), h.1)?,
        );
        let gg = g.0 * g.0 + g.1 * g.1;
        if !(gg > 0.0) || !gg.is_finite() {
            break;
        }
        if lambda == 0.0 {
            lambda = 1e-3 * gg;
        }
        // Increase the damping until the residual drops.
        let mut improved = false;
        for _ in 0..30 {
            let k = -v.j / (gg + lambda);
            let trial = (x.0 + k * g.0, x.1 + k * g.1);
            if let Ok(tv) = eval(trial) {
                if tv.j.abs() < v.j.abs() {
                    x = trial;
                    v = tv;
                    lambda /= 10.0;
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        trace.push(v.j.abs());
        if !improved {
            break;
        }
    }
    if v.j.abs() <= opts.tol * v.scale {
        return Ok(CrPoint { omega: x.0, gamma: x.1, refined: true });
    }
    Err(Error::NonConvergence {
        iterations: trace.len() - 1,
        residual: v.j.abs(),
        trace,
        best: vec![x.0, x.1],
    })
}

/// Results of one zoom window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowStep {
    pub window: Window,
    /// Lowest bracket over all columns.
    pub gamma_star: f64,
    /// Range of columns attaining `gamma_star`.
    pub omega_star: (f64, f64),
    /// Lowest refined root and its `omega`.
    pub omega_2star: f64,
    pub gamma_2star: f64,
    /// Change from the previous window.
    pub delta: Option<(f64, f64)>,
    pub columns_without_bracket: usize,
    pub refine_failures: usize,
    pub refined: Vec<CrPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPointResult {
    pub gamma2: f64,
    /// Mesh estimate from the last window.
    pub omega2_interval: (f64, f64),
    /// Refined estimate from the last window.
    pub omega2_point: f64,
    pub window_trace: Vec<WindowStep>,
}

fn window_step(case: CaseSigns, w: &Window, prev: Option<&WindowStep>) -> Result<WindowStep> {
    let (curve, columns) = trace_gamma_cr(case, &w.omega_nodes(), &w.gamma_nodes());
    let columns_without_bracket = columns.iter().filter(|c| c.lower.is_empty()).count();
    let gamma_star = curve
        .points
        .iter()
        .map(|p| p.gamma)
        .fold(f64::INFINITY, f64::min);
    if !gamma_star.is_finite() {
        return Err(Error::NoSignChange { omega: w.omega_lo });
    }
    let at_min: Vec<f64> = curve.points.iter().filter(|p| p.gamma == gamma_star).map(|p| p.omega).collect();
    let omega_star = (at_min[0], *at_min.last().unwrap());

    let opts = RefineOptions::default();
    let results: Vec<Result<CrPoint>> =
        curve.points.par_iter().map(|p| refine_root(case, (p.omega, p.gamma), &opts)).collect();
    let refine_failures = results.iter().filter(|r| r.is_err()).count();
    let refined: Vec<CrPoint> = results.into_iter().filter_map(|r| r.ok()).collect();
    let best = refined
        .iter()
        .min_by(|a, b| a.gamma.total_cmp(&b.gamma))
        .ok_or(Error::NoSignChange { omega: w.omega_lo })?;
    Ok(WindowStep {
        window: *w,
        gamma_star,
        omega_star,
        omega_2star: best.omega,
        gamma_2star: best.gamma,
        delta: prev.map(|p| (best.omega - p.omega_2star, best.gamma - p.gamma_2star)),
        columns_without_bracket,
        refine_failures,
        refined,
    })
}

/// Zooms through `schedule`, running the mesh scan and the root refinement
/// in every window.
pub fn find_min_point(case: CaseSigns, schedule: &[Window]) -> Result<MinPointResult> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("empty window schedule".into()));
    }
    let mut trace: Vec<WindowStep> = Vec::new();
    for w in schedule {
        w.validate()?;
        let step = window_step(case, w, trace.last())?;
        trace.push(step);
    }
    let last = trace.last().unwrap();
    Ok(MinPointResult {
        gamma2: last.gamma_2star,
        omega2_interval: last.omega_star,
        omega2_point: last.omega_2star,
        window_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_pick_downward_changes() {
        let g = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let j = [Some(2.0), Some(-1.0), Some(1.0), Some(0.0), Some(-3.0), None];
        let b = brackets_in(0.5, &g, &j);
        assert_eq!(b.lower, vec![0.0, 3.0]);
        assert_eq!(b.chosen().unwrap(), 3.0);
        let none = brackets_in(0.5, &g, &[Some(1.0); 6]);
        assert!(matches!(none.chosen(), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn fd_has_no_critical_curve() {
        let g = crate::regions::linspace(-3.0, 1.0, 40);
        let (curve, cols) = trace_gamma_cr(CaseSigns::FD, &[0.1, 0.5], &g);
        assert!(curve.points.is_empty());
        assert!(cols.iter().all(|c| c.lower.is_empty()));
    }

    #[test]
    fn refined_root_has_small_residual() {
        let p = refine_root(CaseSigns::FF, (0.55, 1.5815), &RefineOptions::default()).unwrap();
        let v = j_at(CaseSigns::FF, p.omega, p.gamma, &QuadOptions::default()).unwrap();
        assert!(v.j.abs() <= 1e-9 * v.scale);
        assert!((p.omega - 0.55).abs() < 1e-3);
    }
}
