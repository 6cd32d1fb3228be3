//! Finite-difference solvers for `phi'' = g(phi)` on `[0, T]` with
//! `phi'(0) = 0` (ghost node `phi_{-1} = phi_1`) and `phi(T) = 0`.
//!
//! The unknowns are `phi_0 .. phi_{N-1}`; `phi(0)` is left free so the
//! linearisation has no translation kernel.

use super::{uniform_grid, ProfileMethod, ProfileSolution};
use crate::error::{Error, Result};
use crate::potential::{classify_coeffs, ExistenceClass, GeneralCoeffs, ModelParams, DEFAULT_ZERO_TOL};

/// Discretisation of `phi''` against `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// `d2 phi_i = dt^2 (g_{i-1} + 10 g_i + g_{i+1}) / 12`, fourth order.
    #[default]
    Numerov,
    /// `d2 phi_i = dt^2 g_i`, second order.
    Central,
}

impl Stencil {
    fn weights(self) -> (f64, f64) {
        match self {
            Stencil::Numerov => (1.0 / 12.0, 10.0 / 12.0),
            Stencil::Central => (0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub stencil: Stencil,
    pub max_iters: usize,
    /// Stop when the sup norm of the update is at most `tol`.
    pub tol: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { stencil: Stencil::Numerov, max_iters: 50, tol: 1e-12 }
    }
}

/// Solves a tridiagonal system. `lower[0]` and `upper[n-1]` are ignored.
pub fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let scale = diag.iter().chain(lower).chain(upper).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut beta = diag[0];
    for i in 0..n {
        if i > 0 {
            beta = diag[i] - lower[i] * c[i - 1];
        }
        if !(beta.abs() > 1e-14 * scale) {
            return Err(Error::SingularLinearOperator);
        }
        c[i] = if i + 1 < n { upper[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - if i > 0 { lower[i] * d[i - 1] } else { 0.0 }) / beta;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularLinearOperator);
    }
    Ok(d)
}

struct System<'a> {
    c: &'a GeneralCoeffs,
    dt2: f64,
    ws: f64,
    wm: f64,
}

impl System<'_> {
    fn weigh(&self, z: &[f64]) -> Vec<f64> {
        let n = z.len();
        let at = |i: usize| if i < n { z[i] } else { 0.0 };
        (0..n)
            .map(|i| {
                if i == 0 {
                    2.0 * self.ws * at(1) + self.wm * z[0]
                } else {
                    self.ws * (z[i - 1] + at(i + 1)) + self.wm * z[i]
                }
            })
            .collect()
    }

    fn second_difference(u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let at = |i: usize| if i < n { u[i] } else { 0.0 };
        (0..n)
            .map(|i| if i == 0 { 2.0 * (at(1) - u[0]) } else { u[i - 1] - 2.0 * u[i] + at(i + 1) })
            .collect()
    }

    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let g: Vec<f64> = u.iter().map(|&x| self.c.field(x)).collect();
        let wg = self.weigh(&g);
        Self::second_difference(u)
            .iter()
            .zip(&wg)
            .map(|(d, w)| d - self.dt2 * w)
            .collect()
    }

    /// Tridiagonal Jacobian of the residual at `u`.
    fn jacobian(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = u.len();
        let gp: Vec<f64> = u.iter().map(|&x| self.c.field_prime(x)).collect();
        let mut lo = vec![0.0; n];
        let mut di = vec![0.0; n];
        let mut up = vec![0.0; n];
        for i in 0..n {
            di[i] = -2.0 - self.dt2 * self.wm * gp[i];
            if i > 0 {
                lo[i] = 1.0 - self.dt2 * self.ws * gp[i - 1];
            }
            if i + 1 < n {
                up[i] = if i == 0 {
                    2.0 - 2.0 * self.dt2 * self.ws * gp[1]
                } else {
                    1.0 - self.dt2 * self.ws * gp[i + 1]
                };
            }
        }
        (lo, di, up)
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn setup(c: &GeneralCoeffs, u0: &ProfileSolution, dt: f64) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let phi0 = match classify_coeffs(c, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, .. } => phi0,
        other => return Err(Error::NotExists(other)),
    };
    let t_end = u0.t_end();
    if !(dt > 0.0) || dt * 3.0 > t_end {
        return Err(Error::InvalidArgument(format!("step {dt} too large for horizon {t_end}")));
    }
    let grid = uniform_grid(t_end, dt);
    let u: Vec<f64> = grid[..grid.len() - 1].iter().map(|&t| u0.value_at(t)).collect();
    Ok((phi0, grid, u))
}

fn finish(grid: Vec<f64>, mut u: Vec<f64>, method: ProfileMethod, c: &GeneralCoeffs, phi0: f64) -> ProfileSolution {
    u.push(0.0);
    ProfileSolution::assemble(grid, u, method, c, phi0)
}

/// Damped Newton iteration on the full nonlinear finite-difference system,
/// started from `u0` resampled to step `dt`. The step is halved until the
/// residual norm decreases.
pub fn bvp_solve(params: &ModelParams, u0: &ProfileSolution, dt: f64, tol: f64) -> Result<ProfileSolution> {
    bvp_solve_coeffs(&params.coeffs(), u0, dt, &FdOptions { tol, ..FdOptions::default() })
}

pub fn bvp_solve_coeffs(c: &GeneralCoeffs, u0: &ProfileSolution, dt: f64, opts: &FdOptions) -> Result<ProfileSolution> {
    let (phi0, grid, mut u) = setup(c, u0, dt)?;
    let dt = grid[1] - grid[0];
    let (ws, wm) = opts.stencil.weights();
    let sys = System { c, dt2: dt * dt, ws, wm };
    let mut r = sys.residual(&u);
    let mut rn = sup(&r);
    let mut trace = vec![rn];
    for _ in 0..opts.max_iters {
        let (lo, di, up) = sys.jacobian(&u);
        let neg: Vec<f64> = r.iter().map(|v| -v).collect();
        let delta = thomas(&lo, &di, &up, &neg)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + lambda * d).collect();
            let tr = sys.residual(&trial);
            let tn = sup(&tr);
            if tn < rn || (tn == 0.0 && rn == 0.0) {
                accepted = Some((trial, tr, tn));
                break;
            }
            lambda *= 0.5;
        }
        let step = lambda * sup(&delta);
        match accepted {
            Some((trial, tr, tn)) => {
                u = trial;
                r = tr;
                rn = tn;
                trace.push(rn);
            }
            // No decrease possible: converged to rounding level or stuck.
            None => {
                if sup(&delta) <= opts.tol.max(1e-14 * sup(&u)) {
                    return Ok(finish(grid, u, ProfileMethod::Bvp, c, phi0));
                }
                break;
            }
        }
        if step <= opts.tol {
            return Ok(finish(grid, u, ProfileMethod::Bvp, c, phi0));
        }
    }
    Err(Error::NonConvergence { iterations: trace.len() - 1, residual: rn, trace, best: u })
}

/// Picard iteration `v1 = L^-1 F0`, `v(k+1) = v1 + L^-1 N(v(k))` for the
/// correction `v = u - u0`, where `L` is the finite-difference
/// linearisation at `u0`. A singular `L` triggers one retry with `dt`
/// perturbed by 0.3%.
pub fn picard_solve(
    params: &ModelParams,
    u0: &ProfileSolution,
    dt: f64,
    max_iters: usize,
    tol: f64,
) -> Result<ProfileSolution> {
    picard_solve_coeffs(&params.coeffs(), u0, dt, &FdOptions { max_iters, tol, ..FdOptions::default() })
}

pub fn picard_solve_coeffs(c: &GeneralCoeffs, u0: &ProfileSolution, dt: f64, opts: &FdOptions) -> Result<ProfileSolution> {
    match picard_once(c, u0, dt, opts) {
        Err(Error::SingularLinearOperator) => picard_once(c, u0, dt * 1.003, opts),
        other => other,
    }
}

fn picard_once(c: &GeneralCoeffs, u0: &ProfileSolution, dt: f64, opts: &FdOptions) -> Result<ProfileSolution> {
    let (phi0, grid, base) = setup(c, u0, dt)?;
    let dt = grid[1] - grid[0];
    let (ws, wm) = opts.stencil.weights();
    let sys = System { c, dt2: dt * dt, ws, wm };
    let (lo, di, up) = sys.jacobian(&base);
    let solve = |rhs: &[f64]| -> Result<Vec<f64>> {
        let x = thomas(&lo, &di, &up, rhs)?;
        // A nearly singular L shows up as a large back-substitution residual.
        let n = x.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut ax = di[i] * x[i];
            if i > 0 {
                ax += lo[i] * x[i - 1];
            }
            if i + 1 < n {
                ax += up[i] * x[i + 1];
            }
            worst = worst.max((ax - rhs[i]).abs());
        }
        if !(worst <= 1e-8 * (sup(rhs) + 4.0 * sup(&x))) {
            return Err(Error::SingularLinearOperator);
        }
        Ok(x)
    };
    let g0: Vec<f64> = base.iter().map(|&x| c.field(x)).collect();
    let gp0: Vec<f64> = base.iter().map(|&x| c.field_prime(x)).collect();
    let f0: Vec<f64> = sys.residual(&base).iter().map(|v| -v).collect();
    let nonlinear = |v: &[f64]| -> Vec<f64> {
        let z: Vec<f64> = (0..v.len())
            .map(|i| c.field(base[i] + v[i]) - g0[i] - gp0[i] * v[i])
            .collect();
        sys.weigh(&z).iter().map(|w| sys.dt2 * w).collect()
    };

    let v1 = solve(&f0)?;
    let mut v = v1.clone();
    let mut trace = Vec::new();
    for _ in 0..opts.max_iters {
        let corr = solve(&nonlinear(&v))?;
        let next: Vec<f64> = v1.iter().zip(&corr).map(|(a, b)| a + b).collect();
        let change = v.iter().zip(&next).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        v = next;
        trace.push(change);
        if !change.is_finite() {
            break;
        }
        if change <= opts.tol {
            let u: Vec<f64> = base.iter().zip(&v).map(|(a, b)| a + b).collect();
            return Ok(finish(grid, u, ProfileMethod::Picard, c, phi0));
        }
    }
    let residual = trace.last().copied().unwrap_or(f64::NAN);
    let best = base.iter().zip(&v).map(|(a, b)| a + b).collect();
    Err(Error::NonConvergence { iterations: trace.len(), residual, trace, best })
}
