//! Profile from the phase-plane quadrature
//! `t(phi) = int_phi^phi0 dx / sqrt(2 G(x))`, inverted on a uniform grid.
//!
//! With `x = phi0 sech^2(w)` and `G(x) = x^2 (phi0 - x) P(x)` the integrand
//! becomes `dt/dw = sqrt(2 / (phi0 P(x)))`, smooth and bounded, so `t(w)` is
//! tabulated and inverted by Newton's method.

use super::{uniform_grid, ProfileMethod, ProfileSolution};
use crate::error::{Error, Result};
use crate::potential::{classify_coeffs, ExistenceClass, GeneralCoeffs, ModelParams, DEFAULT_ZERO_TOL};
use crate::quadrature::kronrod15;

pub fn quadrature_profile(params: &ModelParams, t_end: f64, dt: f64, phi_samples: usize) -> Result<ProfileSolution> {
    quadrature_profile_coeffs(&params.coeffs(), t_end, dt, phi_samples)
}

pub fn quadrature_profile_coeffs(c: &GeneralCoeffs, t_end: f64, dt: f64, phi_samples: usize) -> Result<ProfileSolution> {
    if !(t_end > 0.0 && dt > 0.0 && dt < t_end) || phi_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < dt < T and phi_samples >= 2, got T = {t_end}, dt = {dt}, {phi_samples}"
        )));
    }
    let phi0 = match classify_coeffs(c, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, .. } => phi0,
        other => return Err(Error::NotExists(other)),
    };
    let (q, _) = c.reduced_potential().deflate(phi0);
    let p = q.scale(-0.5);
    let rate = |w: f64| {
        let s = 1.0 / w.cosh();
        (2.0 / (phi0 * p.eval(phi0 * s * s))).sqrt()
    };
    let piece = |a: f64, b: f64| kronrod15(rate, a, b);

    // Asymptotically dt/dw = 2 / sqrt(omega).
    let w_guess = 0.5 * t_end * c.omega.sqrt() + 5.0;
    let dw = w_guess / phi_samples as f64;
    let mut ws = vec![0.0];
    let mut ts = vec![0.0];
    while *ts.last().unwrap() < t_end {
        let a = *ws.last().unwrap();
        ts.push(ts.last().unwrap() + piece(a, a + dw));
        ws.push(a + dw);
    }

    let grid = uniform_grid(t_end, dt);
    let mut phi = Vec::with_capacity(grid.len());
    let mut k = 0;
    for &t in &grid {
        while ts[k + 1] < t {
            k += 1;
        }
        let (t0, t1) = (ts[k], ts[k + 1]);
        let mut w = ws[k] + (t - t0) / (t1 - t0) * dw;
        for _ in 0..8 {
            let f = t0 + piece(ws[k], w) - t;
            let step = f / rate(w);
            w -= step;
            if step.abs() <= 1e-15 * w.max(1.0) {
                break;
            }
        }
        let s = 1.0 / w.cosh();
        phi.push(phi0 * s * s);
    }
    Ok(ProfileSolution::assemble(grid, phi, ProfileMethod::Quadrature, c, phi0))
}
