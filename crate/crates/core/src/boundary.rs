//! Curves in the `(omega, gamma)` plane along which `G` has a positive
//! double zero, parametrized by the location `t` of that zero.
//!
//! On such a curve `G(x) = -(a3/5) x^2 (x - t)^2 (x - x0)` with
//!
//! ```text
//! omega = a1 t / 3 - a3 t^3 / 5,   gamma = 2 a1 / (3 t) + 6 a3 t / 5,
//! x0 = 5 omega / (2 a3 t^2).
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::CaseSigns;

/// A point of the double-zero curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub t: f64,
    pub omega: f64,
    pub gamma: f64,
    /// Remaining simple zero of `G / x^2`.
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "level")]
pub enum CurveLabel {
    GammaNo,
    GammaCr,
    LevelSet(f64),
}

impl CurveLabel {
    pub fn name(&self) -> String {
        match self {
            CurveLabel::GammaNo => "gamma_no".into(),
            CurveLabel::GammaCr => "gamma_cr".into(),
            CurveLabel::LevelSet(l) => format!("level_{l}"),
        }
    }
}

/// Ordered polyline in the parameter plane. `t` holds the curve parameter
/// per point when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    pub label: CurveLabel,
    pub points: Vec<(f64, f64)>,
    pub t: Option<Vec<f64>>,
}

impl ParamCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `sqrt(5)/3`, end of the F*F curve where the double zero becomes triple.
pub fn ff_t_max() -> f64 {
    5f64.sqrt() / 3.0
}

/// `sqrt(5/3)`, start of the D*D curve where `omega` reaches zero.
pub fn dd_t_min() -> f64 {
    (5.0f64 / 3.0).sqrt()
}

/// The triple-zero point `(omega_1, gamma_1) = (2 sqrt5 / 27, 4 sqrt5 / 5)`.
pub fn triple_zero_point() -> (f64, f64) {
    let s5 = 5f64.sqrt();
    (2.0 * s5 / 27.0, 4.0 * s5 / 5.0)
}

/// `(0, -8 sqrt15 / 15)`, the limit of the D*D curve as `t -> sqrt(5/3)`.
pub fn dd_endpoint() -> (f64, f64) {
    (0.0, -8.0 * 15f64.sqrt() / 15.0)
}

fn check_admissible(t: f64, case: CaseSigns) -> Result<()> {
    let ok = t.is_finite()
        && match case {
            CaseSigns::FF => t > 0.0 && t <= ff_t_max() * (1.0 + 4.0 * f64::EPSILON),
            CaseSigns::FD => t > 0.0,
            CaseSigns::DD => t > dd_t_min(),
            CaseSigns::DF => return Err(Error::EmptyCurve(case.label())),
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Inadmissible { t, case: case.label() })
    }
}

pub fn gamma_no_point(t: f64, case: CaseSigns) -> Result<BoundaryPoint> {
    check_admissible(t, case)?;
    let (a1, a3) = (case.a1(), case.a3());
    let omega = a1 * t / 3.0 - a3 * t.powi(3) / 5.0;
    let gamma = 2.0 * a1 / (3.0 * t) + 6.0 * a3 * t / 5.0;
    let x0 = 5.0 * omega / (2.0 * a3 * t * t);
    Ok(BoundaryPoint { t, omega, gamma, x0 })
}

/// `n` points of the curve, uniform in `t` over `[t_lo, t_hi]`.
pub fn gamma_no_curve(case: CaseSigns, t_lo: f64, t_hi: f64, n: usize) -> Result<ParamCurve> {
    if case == CaseSigns::DF {
        return Err(Error::EmptyCurve(case.label()));
    }
    if n < 2 || !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2 and t_lo < t_hi, got n = {n}, [{t_lo}, {t_hi}]"
        )));
    }
    let ts = crate::regions::linspace(t_lo, t_hi, n);
    let pts = ts
        .iter()
        .map(|&t| gamma_no_point(t, case))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParamCurve {
        label: CurveLabel::GammaNo,
        points: pts.iter().map(|p| (p.omega, p.gamma)).collect(),
        t: Some(ts),
    })
}

/// `gamma` on the F*F curve above `omega`, for `0 < omega <= omega_1`. Here
/// `omega(t)` increases with `t`, so the curve is a graph over `omega` and
/// `phi0` jumps exactly when it is crossed.
pub fn ff_gamma_no_at(omega: f64) -> Option<f64> {
    let (w1, _) = triple_zero_point();
    if !(omega > 0.0 && omega <= w1) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, ff_t_max());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid / 3.0 - mid.powi(3) / 5.0 < omega {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    gamma_no_point(hi, CaseSigns::FF).ok().map(|p| p.gamma)
}

/// Limits of `phi0` when approaching the curve point at `t` from below and
/// from above. Only F*F has a limit from above.
pub fn phi0_limits_across(t: f64, case: CaseSigns) -> Result<(f64, Option<f64>)> {
    let p = gamma_no_point(t, case)?;
    match case {
        CaseSigns::FF => Ok((t, Some(p.x0.max(t)))),
        _ => Ok((t, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ff_endpoint_is_triple_zero() {
        let p = gamma_no_point(ff_t_max(), CaseSigns::FF).unwrap();
        let (w1, g1) = triple_zero_point();
        assert!((p.omega - w1).abs() < 1e-15);
        assert!((p.gamma - g1).abs() < 1e-14);
        assert!((p.x0 - p.t).abs() < 1e-14);
        assert!((w1 - 0.165635).abs() < 1e-6 && (g1 - 1.788854).abs() < 1e-6);
    }

    #[test]
    fn fd_unit_t() {
        let p = gamma_no_point(1.0, CaseSigns::FD).unwrap();
        assert!((p.omega - 8.0 / 15.0).abs() < 1e-15);
        assert!((p.gamma + 8.0 / 15.0).abs() < 1e-15);
        assert!((p.x0 + 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn dd_limit() {
        let p = gamma_no_point(dd_t_min() * (1.0 + 1e-9), CaseSigns::DD).unwrap();
        let (w, g) = dd_endpoint();
        assert!((p.omega - w).abs() < 1e-8 && (p.gamma - g).abs() < 1e-8);
        assert!((g + 2.065591).abs() < 1e-6);
    }

    #[test]
    fn rejections() {
        assert!(matches!(gamma_no_point(0.5, CaseSigns::DF), Err(Error::EmptyCurve(_))));
        assert!(matches!(gamma_no_point(0.8, CaseSigns::FF), Err(Error::Inadmissible { .. })));
        assert!(gamma_no_point(1.0, CaseSigns::DD).is_err());
        assert!(gamma_no_point(-1.0, CaseSigns::FD).is_err());
        assert!(gamma_no_curve(CaseSigns::DF, 0.1, 0.2, 10).is_err());
    }

    #[test]
    fn limits_across() {
        let (b, a) = phi0_limits_across(0.7, CaseSigns::FF).unwrap();
        assert_eq!(b, 0.7);
        assert!((a.unwrap() - 0.8405).abs() < 5e-5);
        let (_, a) = phi0_limits_across(ff_t_max(), CaseSigns::FF).unwrap();
        assert!((a.unwrap() - ff_t_max()).abs() < 1e-14);
        assert_eq!(phi0_limits_across(1.0, CaseSigns::FD).unwrap().1, None);
    }

    #[test]
    fn ff_gamma_no_at_inverts_the_curve() {
        for t in [0.05, 0.3, 0.6, 0.74] {
            let p = gamma_no_point(t, CaseSigns::FF).unwrap();
            let g = ff_gamma_no_at(p.omega).unwrap();
            assert!((g - p.gamma).abs() < 1e-9 * p.gamma, "t {t}: {g} vs {}", p.gamma);
        }
        assert!(ff_gamma_no_at(0.2).is_none());
        assert!(ff_gamma_no_at(0.0).is_none());
    }
}
