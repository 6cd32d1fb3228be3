//! Explicit single- and double-power solitary waves and the coefficient map
//! of a quartic `g` with prescribed zeros. Used as oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::GeneralCoeffs;

/// `Q_p(x) = ((p + 1)/2 sech^2((p - 1) x / 2))^(1/(p - 1))`, the ground
/// state of `Q'' - Q + Q^p = 0`.
pub fn qp(p: f64, x: f64) -> f64 {
    assert!(p > 1.0, "qp needs p > 1");
    let s = 1.0 / ((p - 1.0) * x / 2.0).cosh();
    ((p + 1.0) / 2.0 * s * s).powf(1.0 / (p - 1.0))
}

/// `omega^(1/(p-1)) Q_p(sqrt(omega) x)`, solving `phi'' = omega phi - phi^p`.
pub fn phi_single(p: f64, omega: f64, x: f64) -> f64 {
    omega.powf(1.0 / (p - 1.0)) * qp(p, omega.sqrt() * x)
}

/// `omega* = beta (beta + 1) / (2 beta + 1)^2`.
pub fn omega_star(beta: f64) -> f64 {
    beta * (beta + 1.0) / (2.0 * beta + 1.0).powi(2)
}

/// Solutions of `phi'' = omega phi - a1 phi^(1+1/beta) - a2 phi^(1+2/beta)`
/// indexed by `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublePowerFamily {
    pub beta: f64,
    pub ell: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
    pub k: f64,
    pub lambda: f64,
    pub omega: f64,
}

impl DoublePowerFamily {
    pub fn new(beta: f64, ell: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() || !(ell > -1.0) || ell == -0.5 || ell == 0.0 || !ell.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need beta > 0 and ell in (-1, inf) without -1/2 and 0, got ({beta}, {ell})"
            )));
        }
        let a = 4.0 * beta * beta;
        let b = 2.0 * beta * (2.0 * beta + 1.0) * (2.0 * ell + 1.0);
        let c = -4.0 * beta * (beta + 1.0) * ell * (ell + 1.0);
        let k = (c / b).abs().powf(beta);
        let lambda = c.abs().sqrt() / b.abs();
        Ok(DoublePowerFamily {
            beta,
            ell,
            a,
            b,
            c,
            a1: b.signum(),
            a2: c.signum(),
            k,
            lambda,
            omega: 4.0 * beta * beta * lambda * lambda,
        })
    }

    /// `d omega / d ell = 4 omega* sgn(ell) / (2 ell + 1)^3`.
    pub fn domega_dell(&self) -> f64 {
        4.0 * omega_star(self.beta) * self.ell.signum() / (2.0 * self.ell + 1.0).powi(3)
    }

    /// The quartic-field coefficients when both powers are integers in
    /// `{2, 3, 4}`, which happens only for `beta = 1`.
    pub fn general_coeffs(&self) -> Option<GeneralCoeffs> {
        (self.beta == 1.0).then(|| GeneralCoeffs::new(self.omega, self.a1, self.a2, 0.0))
    }
}

/// `k (ell + cosh^2(sqrt(omega) x / (2 beta)))^(-beta)`.
pub fn double_power_profile(fam: &DoublePowerFamily, x: f64) -> f64 {
    let ch = (fam.omega.sqrt() * x / (2.0 * fam.beta)).cosh();
    fam.k * (fam.ell + ch * ch).powf(-fam.beta)
}

/// F*F parameters whose `g` is `-x (x - a)(x - b)(x - x3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example35 {
    pub omega: f64,
    pub gamma: f64,
    pub zeros: (f64, f64, f64),
}

pub fn example35_coeffs(a: f64, b: f64) -> Result<Example35> {
    if !(a > 0.0 && b > 0.0 && a * b < 1.0) {
        return Err(Error::InvalidArgument(format!("need a, b > 0 and ab < 1, got ({a}, {b})")));
    }
    let x3 = (1.0 - a * b) / (a + b);
    Ok(Example35 { omega: a * b * x3, gamma: a + b + x3, zeros: (a, b, x3) })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Second derivative by Richardson-extrapolated central differences.
    fn d2(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let c = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let h = 4e-3;
        (4.0 * c(h / 2.0) - c(h)) / 3.0
    }

    #[test]
    fn qp_values() {
        assert!((qp(3.0, 0.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((qp(3.0, 1.0) - 2f64.sqrt() / 1f64.cosh()).abs() < 1e-15);
        assert!((qp(3.0, 1.0) - 0.916_487).abs() < 1e-6);
    }

    #[test]
    fn single_power_ode() {
        for p in [2.0, 3.0, 4.0] {
            for w in [0.5, 1.0, 2.0] {
                for i in 0..40 {
                    let x = -2.0 + 0.1 * i as f64;
                    let f = |x| phi_single(p, w, x);
                    let r = d2(f, x) - w * f(x) + f(x).powf(p);
                    assert!(r.abs() < 1e-9, "p {p} w {w} x {x}: {r}");
                }
            }
        }
    }

    #[test]
    fn beta_one_ell_one() {
        let f = DoublePowerFamily::new(1.0, 1.0).unwrap();
        assert!((f.omega - 16.0 / 81.0).abs() < 1e-15);
        assert!((f.k - 8.0 / 9.0).abs() < 1e-15);
        assert!((f.lambda - 2.0 / 9.0).abs() < 1e-15);
        assert!((double_power_profile(&f, 0.0) - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(f.general_coeffs(), Some(GeneralCoeffs::new(16.0 / 81.0, 1.0, -1.0, 0.0)));
    }

    #[test]
    fn double_power_ode() {
        for beta in [1.0, 2.0] {
            for ell in [-0.75, -0.25, 1.0] {
                let fam = DoublePowerFamily::new(beta, ell).unwrap();
                // phi = k w(mu x) with w = (ell + ch^2)^(-beta), differentiated
                // directly by the chain rule.
                let mu = fam.omega.sqrt() / (2.0 * beta);
                let phi_xx = |x: f64| {
                    let (ch, sh) = ((mu * x).cosh(), (mu * x).sinh());
                    let u = ell + ch * ch;
                    let w2 = 4.0 * beta * (beta + 1.0) * u.powf(-beta - 2.0) * (ch * sh).powi(2)
                        - 2.0 * beta * u.powf(-beta - 1.0) * (sh * sh + ch * ch);
                    fam.k * mu * mu * w2
                };
                for i in 0..40 {
                    let x = 0.25 * i as f64;
                    let v = double_power_profile(&fam, x);
                    let rhs = fam.omega * v - fam.a1 * v.powf(1.0 + 1.0 / beta) - fam.a2 * v.powf(1.0 + 2.0 / beta);
                    let r = phi_xx(x) - rhs;
                    assert!(r.abs() < 1e-9, "beta {beta} ell {ell} x {x}: {r}");
                }
            }
        }
    }

    #[test]
    fn example35() {
        let e = example35_coeffs(0.2, 0.6).unwrap();
        assert!((e.omega - 0.132).abs() < 1e-15);
        assert!((e.gamma - 1.9).abs() < 1e-15);
        assert!((e.zeros.2 - 1.1).abs() < 1e-15);
        assert!(example35_coeffs(2.0, 0.5).is_err());
    }

    #[test]
    fn rejects_bad_ell() {
        assert!(DoublePowerFamily::new(1.0, 0.0).is_err());
        assert!(DoublePowerFamily::new(1.0, -0.5).is_err());
        assert!(DoublePowerFamily::new(1.0, -1.0).is_err());
        assert!(DoublePowerFamily::new(0.0, 1.0).is_err());
    }
}
