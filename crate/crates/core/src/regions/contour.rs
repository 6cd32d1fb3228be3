//! Marching squares on a masked grid.

use std::collections::HashMap;

use super::{OmegaScale, ScalarField};
use crate::boundary::{CurveLabel, ParamCurve};
use crate::boundary::ff_gamma_no_at;
use crate::potential::CaseSigns;

/// Grid edge: `(i, j, vertical)` joins node `(i, j)` to `(i + 1, j)` when
/// horizontal, to `(i, j + 1)` when vertical.
type EdgeId = (usize, usize, bool);

/// Level curves of `J`. Cells with an undefined corner are skipped, so
/// curves end at the mask. In F*F so are cells cut by the non-existence
/// curve, across which `phi0` and `J` jump. Crossings are interpolated linearly in the plotted
/// coordinate (`ln omega` on a log axis).
pub fn extract_level_curves(field: &ScalarField, levels: &[f64]) -> Vec<ParamCurve> {
    levels.iter().flat_map(|&l| level_curves(field, l)).collect()
}

fn level_curves(field: &ScalarField, level: f64) -> Vec<ParamCurve> {
    let w = &field.window;
    let log = w.omega_scale == OmegaScale::Log;
    let xs: Vec<f64> = w.omega_nodes().iter().map(|&o| if log { o.ln() } else { o }).collect();
    let ys = w.gamma_nodes();
    let (nx, ny) = (xs.len(), ys.len());
    let val = |i: usize, j: usize| field.j[j * nx + i];
    let omegas = w.omega_nodes();
    let branch = |i: usize, j: usize| match field.case {
        CaseSigns::FF => ff_gamma_no_at(omegas[i]).map(|g| ys[j] > g),
        _ => None,
    };
    let same_branch = |i: usize, j: usize| {
        let b = branch(i, j);
        [(i + 1, j), (i + 1, j + 1), (i, j + 1)].iter().all(|&(a, c)| branch(a, c) == b)
    };

    let point = |e: EdgeId| -> (f64, f64) {
        let (i, j, vertical) = e;
        let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
        let (a, b) = (val(i, j).unwrap(), val(i2, j2).unwrap());
        let s = if a == b { 0.5 } else { (level - a) / (b - a) };
        let x = xs[i] + s * (xs[i2] - xs[i]);
        let y = ys[j] + s * (ys[j2] - ys[j]);
        (if log { x.exp() } else { x }, y)
    };

    let mut segments: Vec<[EdgeId; 2]> = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let Some(v) = c.iter().copied().collect::<Option<Vec<f64>>>() else {
                continue;
            };
            let above: Vec<bool> = v.iter().map(|&x| x > level).collect();
            let edges: [EdgeId; 4] = [(i, j, false), (i + 1, j, true), (i, j + 1, false), (i, j, true)];
            // Edge k joins corners k and k+1 (mod 4).
            let cut: Vec<usize> = (0..4).filter(|&k| above[k] != above[(k + 1) % 4]).collect();
            if !cut.is_empty() && !same_branch(i, j) {
                continue;
            }
            match cut.len() {
                2 => segments.push([edges[cut[0]], edges[cut[1]]]),
                4 => {
                    let centre = v.iter().sum::<f64>() / 4.0 > level;
                    // Separate off the two corners whose state differs from
                    // the centre. Corner k sits between edges k-1 and k.
                    for k in 0..4 {
                        if above[k] != centre {
                            segments.push([edges[(k + 3) % 4], edges[k]]);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            by_edge.entry(*e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut chains: Vec<Vec<EdgeId>> = Vec::new();

    let walk = |start: usize, from: EdgeId, used: &mut Vec<bool>| -> Vec<EdgeId> {
        let mut chain = vec![from];
        let mut s = start;
        let mut at = from;
        loop {
            used[s] = true;
            let seg = segments[s];
            let next = if seg[0] == at { seg[1] } else { seg[0] };
            chain.push(next);
            at = next;
            match by_edge[&at].iter().find(|&&t| !used[t]) {
                Some(&t) => s = t,
                None => break,
            }
        }
        chain
    };

    // Open chains start at edges touched by a single segment; iterate in
    // segment order so the output is deterministic.
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for e in segments[s] {
            if by_edge[&e].len() == 1 && !used[s] {
                chains.push(walk(s, e, &mut used));
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(s, segments[s][0], &mut used));
        }
    }

    chains
        .into_iter()
        .map(|c| ParamCurve {
            label: CurveLabel::LevelSet(level),
            points: c.into_iter().map(point).collect(),
            t: None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{NodeClass, Window};

    fn field(w: Window, f: impl Fn(f64, f64) -> Option<f64>) -> ScalarField {
        let (om, ga) = (w.omega_nodes(), w.gamma_nodes());
        let mut j = Vec::new();
        for &g in &ga {
            for &o in &om {
                j.push(f(o, g));
            }
        }
        let class = j.iter().map(|v| if v.is_some() { NodeClass::Exists } else { NodeClass::None }).collect();
        ScalarField { case: CaseSigns::DD, window: w, class, j }
    }

    #[test]
    fn circle_is_one_closed_curve() {
        let w = Window::new((0.1, 2.1), (-1.0, 1.0), 41, 41).unwrap();
        let f = field(w, |o, g| Some((o - 1.1).powi(2) + g * g));
        let c = extract_level_curves(&f, &[0.25]);
        assert_eq!(c.len(), 1);
        let p = &c[0].points;
        assert_eq!(p.first(), p.last());
        for &(o, g) in p {
            let r = ((o - 1.1).powi(2) + g * g).sqrt();
            assert!((r - 0.5).abs() < 5e-3);
        }
    }

    #[test]
    fn constant_field_has_no_curves() {
        let w = Window::new((0.1, 1.0), (0.0, 1.0), 5, 5).unwrap();
        let f = field(w, |_, _| Some(3.0));
        assert!(extract_level_curves(&f, &[1.0]).is_empty());
    }

    #[test]
    fn mask_cuts_line() {
        let w = Window::new((0.1, 1.1), (0.0, 1.0), 11, 11).unwrap();
        let f = field(w, |o, g| if o > 0.55 && o < 0.75 { None } else { Some(g - 0.45) });
        let c = extract_level_curves(&f, &[0.0]);
        assert_eq!(c.len(), 2);
        for curve in &c {
            for &(_, g) in &curve.points {
                assert!((g - 0.45).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn saddle_follows_centre() {
        let w = Window::new((1.0, 2.0), (0.0, 1.0), 2, 2).unwrap();
        let mut f = field(w, |_, _| Some(0.0));
        // Bottom-left and top-right above the level, the other two below.
        let corners = |bl: f64| vec![Some(bl), Some(-1.0), Some(-1.0), Some(1.0)];
        let isolated = |f: &ScalarField| -> Vec<(f64, f64)> {
            extract_level_curves(f, &[0.0])
                .iter()
                .map(|c| {
                    // The corner shared by both crossing edges.
                    let (p, q) = (c.points[0], c.points[1]);
                    let o = if p.0 == 1.0 || p.0 == 2.0 { p.0 } else { q.0 };
                    let g = if p.1 == 0.0 || p.1 == 1.0 { p.1 } else { q.1 };
                    (o, g)
                })
                .collect()
        };
        // Centre above: the below corners are cut off.
        f.j = corners(1.2);
        let mut v = isolated(&f);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![(1.0, 1.0), (2.0, 0.0)]);
        // Centre below: the above corners are cut off.
        f.j = corners(0.5);
        let mut v = isolated(&f);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![(1.0, 0.0), (2.0, 1.0)]);
    }

    #[test]
    fn log_axis_interpolates_in_log() {
        let w = Window::new((0.01, 1.0), (0.0, 1.0), 2, 2).unwrap().log_omega().unwrap();
        let f = field(w, |o, _| Some(o.log10()));
        let c = extract_level_curves(&f, &[-1.0]);
        assert_eq!(c.len(), 1);
        assert!((c[0].points[0].0 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn ff_zero_level_does_not_follow_the_jump() {
        let w = Window::new((0.01, 0.3), (1.0, 10.0), 60, 60).unwrap();
        let curves = extract_level_curves(&crate::regions::sweep(CaseSigns::FF, &w), &[0.0]);
        let (w1, _) = crate::boundary::triple_zero_point();
        for c in &curves {
            for &(o, g) in &c.points {
                let near_curve = ff_gamma_no_at(o).is_some_and(|gn| (g - gn).abs() < 0.5);
                assert!(!(o < 0.9 * w1 && near_curve), "({o}, {g})");
            }
        }
    }
}
