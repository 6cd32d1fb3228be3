//! Shooting from `(phi0, 0)` with the Dormand-Prince 5(4) pair, and the
//! cropping that turns the raw trajectory into a decaying profile.

use serde::{Deserialize, Serialize};

use super::{uniform_grid, ProfileMethod, ProfileSolution};
use crate::error::{Error, Result};
use crate::potential::{classify_coeffs, ExistenceClass, GeneralCoeffs, ModelParams, DEFAULT_ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    TimeExhausted,
    /// The step size fell below `16 eps(t)`.
    StepUnderflow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    pub coeffs: GeneralCoeffs,
    pub phi0: f64,
    /// Requested horizon.
    pub t_end: f64,
    /// Output nodes actually reached.
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub stop_time: f64,
    pub stop_reason: StopReason,
    pub steps: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions { rtol: 1e-12, atol: 1e-14 }
    }
}

// The system is autonomous, so the stage times are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `phi'' = g(phi)`, `phi(0) = phi0`, `phi'(0) = 0` and records
/// the state at every node of the uniform grid of step `dt` on `[0, T]`.
pub fn shoot(params: &ModelParams, t_end: f64, dt: f64, tol: f64) -> Result<ShootResult> {
    shoot_with(&params.coeffs(), t_end, dt, &ShootOptions { rtol: tol, atol: tol * 1e-2 })
}

pub fn shoot_with(c: &GeneralCoeffs, t_end: f64, dt: f64, opts: &ShootOptions) -> Result<ShootResult> {
    let phi0 = match classify_coeffs(c, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, .. } => phi0,
        other => return Err(Error::NotExists(other)),
    };
    shoot_from(c, phi0, t_end, dt, opts)
}

/// Shooting from `(start, 0)` for an arbitrary amplitude. Starting above
/// `phi0` puts the orbit outside the homoclinic loop.
pub fn shoot_from(c: &GeneralCoeffs, start: f64, t_end: f64, dt: f64, opts: &ShootOptions) -> Result<ShootResult> {
    if !(t_end > 0.0 && dt > 0.0) || !start.is_finite() {
        return Err(Error::InvalidArgument(format!("need T > 0 and dt > 0, got {t_end}, {dt}")));
    }
    let phi0 = start;
    let f = |y: [f64; 2]| [y[1], c.field(y[0])];
    let grid = uniform_grid(t_end, dt);

    let mut out_t = vec![0.0];
    let mut out_y = vec![[phi0, 0.0]];
    let mut t: f64 = 0.0;
    let mut y = [phi0, 0.0];
    let mut h = (1e-3f64).min(dt);
    let mut k1 = f(y);
    let (mut steps, mut rejected) = (0, 0);
    let mut next = 1;
    let mut reason = StopReason::TimeExhausted;

    while next < grid.len() {
        let target = grid[next];
        if h < 16.0 * f64::EPSILON * t.abs() || h < f64::MIN_POSITIVE {
            reason = StopReason::StepUnderflow;
            break;
        }
        let clamped = t + h >= target;
        let step = if clamped { target - t } else { h };

        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += step * A[s][j] * kj[0];
                ys[1] += step * A[s][j] * kj[1];
            }
            k[s] = f(ys);
        }
        // The last stage is evaluated at the fifth-order solution.
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += step * A[6][j] * kj[0];
            y_new[1] += step * A[6][j] * kj[1];
        }
        let mut err = 0.0;
        for i in 0..2 {
            let e: f64 = step * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / 2.0).sqrt();

        if err.is_finite() && err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
            t = if clamped { target } else { t + step };
            y = y_new;
            k1 = k[6];
            steps += 1;
            if clamped {
                out_t.push(t);
                out_y.push(y);
                next += 1;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // A step shortened to hit a node says little about the next one.
            if !clamped || fac < 1.0 {
                h = step * fac;
            }
        } else {
            rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = step * fac;
        }
    }

    Ok(ShootResult {
        coeffs: *c,
        phi0,
        t_end: *grid.last().unwrap(),
        phi: out_y.iter().map(|y| y[0]).collect(),
        dphi: out_y.iter().map(|y| y[1]).collect(),
        t: out_t,
        stop_time: t,
        stop_reason: reason,
        steps,
        rejected,
    })
}

/// Index of the first node that the crop removes.
fn crop_index(phi: &[f64], rising: impl Fn(usize) -> bool) -> usize {
    (1..phi.len()).find(|&i| rising(i) || phi[i] < 0.0).unwrap_or(phi.len())
}

fn zero_extended(t_end: f64, dt: f64, phi: &[f64], keep: usize) -> (Vec<f64>, Vec<f64>) {
    let grid = uniform_grid(t_end, dt);
    let values = (0..grid.len()).map(|i| if i < keep { phi[i] } else { 0.0 }).collect();
    (grid, values)
}

/// Keeps the raw trajectory up to the earliest of its first turning point
/// (`phi' >= 0` after `t = 0`), its first negative value and the solver stop,
/// and sets it to zero from there to `T`.
pub fn crop(raw: &ShootResult) -> ProfileSolution {
    let keep = crop_index(&raw.phi, |i| raw.dphi[i] >= 0.0);
    let dt = if raw.t.len() > 1 { raw.t[1] - raw.t[0] } else { raw.t_end };
    let (t, phi) = zero_extended(raw.t_end, dt, &raw.phi, keep);
    ProfileSolution::assemble(t, phi, ProfileMethod::Shoot, &raw.coeffs, raw.phi0)
}

/// The crop applied to an existing profile, using increasing node values
/// in place of `phi' >= 0`. `crop_trajectory(crop(x)) == crop(x)`.
pub fn crop_trajectory(p: &ProfileSolution, c: &GeneralCoeffs) -> ProfileSolution {
    let keep = crop_index(&p.phi, |i| p.phi[i] > p.phi[i - 1]);
    let (t, phi) = zero_extended(p.t_end(), p.dt(), &p.phi, keep);
    ProfileSolution::assemble(t, phi, p.method, c, p.phi0)
}
