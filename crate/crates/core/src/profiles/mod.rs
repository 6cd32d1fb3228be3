//! Standing-wave profiles `phi(t)` on `[0, T]`: shooting with cropping,
//! quadrature inversion of the phase-plane orbit, Picard iteration and a
//! Newton finite-difference solver, plus the mass functional.

mod fd;
mod quad;
mod shoot;

pub use fd::{bvp_solve, bvp_solve_coeffs, picard_solve, picard_solve_coeffs, thomas, FdOptions, Stencil};
pub use quad::{quadrature_profile, quadrature_profile_coeffs};
pub use shoot::{crop, crop_trajectory, shoot, shoot_from, shoot_with, ShootOptions, ShootResult, StopReason};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{GeneralCoeffs, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMethod {
    Shoot,
    Picard,
    Bvp,
    Quadrature,
}

impl std::str::FromStr for ProfileMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "shoot" => Ok(ProfileMethod::Shoot),
            "picard" => Ok(ProfileMethod::Picard),
            "bvp" => Ok(ProfileMethod::Bvp),
            "quadrature" => Ok(ProfileMethod::Quadrature),
            _ => Err(crate::Error::InvalidArgument(format!("unknown profile method {s:?}"))),
        }
    }
}

/// Default horizon and step.
pub const DEFAULT_T: f64 = 50.0;
pub const DEFAULT_DT: f64 = 0.01;

/// The horizon to use with step `dt`: `T = 20` once `dt <= 1e-3`.
pub fn default_horizon(dt: f64) -> f64 {
    if dt <= 1e-3 {
        20.0
    } else {
        DEFAULT_T
    }
}

/// Uniform grid on `[0, T]` with step at most `dt`; the last node is `T`.
pub fn uniform_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    crate::regions::linspace(0.0, t_end, n + 1)
}

/// Profile by `method` on `[0, t_end]`. Picard starts from the cropped
/// shooting trajectory; the Newton solver starts from the quadrature profile.
pub fn solve_profile(
    params: &ModelParams,
    method: ProfileMethod,
    t_end: f64,
    dt: f64,
    tol: f64,
    max_iters: usize,
) -> Result<ProfileSolution> {
    if !(dt > 0.0 && t_end > dt) {
        return Err(Error::InvalidArgument(format!("need 0 < dt < t_end, got dt {dt}, t_end {t_end}")));
    }
    match method {
        ProfileMethod::Shoot => shoot(params, t_end, dt, tol).map(|r| crop(&r)),
        ProfileMethod::Quadrature => quadrature_profile(params, t_end, dt, QUAD_SAMPLES),
        ProfileMethod::Picard => {
            let guess = crop(&shoot(params, t_end, dt, tol)?);
            picard_solve(params, &guess, dt, max_iters, tol)
        }
        ProfileMethod::Bvp => {
            let guess = quadrature_profile(params, t_end, dt, QUAD_SAMPLES)?;
            bvp_solve(params, &guess, dt, tol)
        }
    }
}

/// Orbit samples used by [`solve_profile`] for quadrature inversion.
pub const QUAD_SAMPLES: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSolution {
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub method: ProfileMethod,
    pub phi0: f64,
    /// `max |phi'^2 / 2 - G(phi)|` over interior nodes, relative to `max G`.
    pub energy_residual: f64,
    /// `max(|phi(0) - phi0|, |phi(T)|)`.
    pub bc_residual: f64,
}

impl ProfileSolution {
    pub(crate) fn assemble(t: Vec<f64>, phi: Vec<f64>, method: ProfileMethod, c: &GeneralCoeffs, phi0: f64) -> Self {
        let energy_residual = energy_residual(&t, &phi, c, phi0);
        let bc_residual = (phi[0] - phi0).abs().max(phi.last().unwrap().abs());
        ProfileSolution { t, phi, method, phi0, energy_residual, bc_residual }
    }

    pub fn dt(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().unwrap()
    }

    /// Linear interpolation, zero beyond the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.phi[0];
        }
        let dt = self.dt();
        let k = (t / dt).floor() as usize;
        if k + 1 >= self.t.len() {
            return if t <= self.t_end() { *self.phi.last().unwrap() } else { 0.0 };
        }
        let s = (t - self.t[k]) / dt;
        self.phi[k] * (1.0 - s) + self.phi[k + 1] * s
    }

    /// Samples on a uniform grid of step `dt` over the same horizon.
    pub fn resample(&self, dt: f64) -> Vec<(f64, f64)> {
        uniform_grid(self.t_end(), dt).into_iter().map(|t| (t, self.value_at(t))).collect()
    }

    /// `sup |phi - other|` over the nodes of `self`.
    pub fn sup_distance(&self, other: &ProfileSolution) -> f64 {
        self.t
            .iter()
            .zip(&self.phi)
            .map(|(&t, &p)| (p - other.value_at(t)).abs())
            .fold(0.0, f64::max)
    }
}

/// Largest `|phi'^2 / 2 - G(phi)|` with a sixth-order central difference
/// for `phi'`, divided by `max G` on `[0, phi0]`. Three nodes at each end
/// are skipped.
pub fn energy_residual(t: &[f64], phi: &[f64], c: &GeneralCoeffs, phi0: f64) -> f64 {
    if phi.len() < 7 {
        return f64::NAN;
    }
    let dt = t[1] - t[0];
    let mut worst: f64 = 0.0;
    for i in 3..phi.len() - 3 {
        let d = (45.0 * (phi[i + 1] - phi[i - 1]) - 9.0 * (phi[i + 2] - phi[i - 2]) + (phi[i + 3] - phi[i - 3]))
            / (60.0 * dt);
        worst = worst.max((0.5 * d * d - c.potential(phi[i])).abs());
    }
    worst / potential_scale(c, phi0)
}

/// `max G` on `[0, phi0]`, located on a fine grid.
pub fn potential_scale(c: &GeneralCoeffs, phi0: f64) -> f64 {
    (1..=1000)
        .map(|k| c.potential(phi0 * k as f64 / 1000.0))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// `N = int_R phi^2 = 2 int_0^T phi^2` by composite Simpson (3/8 on the
/// last three intervals when their number is odd).
pub fn mass(profile: &ProfileSolution) -> f64 {
    let y: Vec<f64> = profile.phi.iter().map(|p| p * p).collect();
    2.0 * simpson(&y, profile.dt())
}

pub(crate) fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        _ => {
            let (even_end, tail) = if n.is_multiple_of(2) || n < 3 { (n, 0.0) } else {
                let k = n - 3;
                (k, 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]))
            };
            let mut s = 0.0;
            let mut i = 0;
            while i + 2 <= even_end {
                s += y[i] + 4.0 * y[i + 1] + y[i + 2];
                i += 2;
            }
            s * h / 3.0 + tail
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [2usize, 3, 4, 7, 10] {
            let h = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!((simpson(&y, h) - 0.25).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn grid_hits_end() {
        let g = uniform_grid(50.0, 0.01);
        assert_eq!(g.len(), 5001);
        assert_eq!(*g.last().unwrap(), 50.0);
        assert!((g[1] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn horizon_shrinks() {
        assert_eq!(default_horizon(0.01), 50.0);
        assert_eq!(default_horizon(0.001), 20.0);
    }
}
