//! Parameter-plane sweeps, level curves of `J` and the minimal point of the
//! critical curve.

mod contour;
mod critical;
mod sweep;

pub use contour::extract_level_curves;
pub use critical::{
    find_min_point, refine_root, trace_gamma_cr, trace_gamma_cr_field, ColumnBrackets, CrCurve, CrMethod,
    CrPoint, MinPointResult, RefineOptions, WindowStep,
};
pub use sweep::{sweep, sweep_with_threads, NodeClass, ScalarField};

use serde::{Deserialize, Serialize};

use crate::boundary::triple_zero_point;
use crate::error::{Error, Result};
use crate::potential::CaseSigns;

/// `n` equispaced nodes with the last one equal to `hi` exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OmegaScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub n_omega: usize,
    pub n_gamma: usize,
    #[serde(default)]
    pub omega_scale: OmegaScale,
}

impl Window {
    pub fn new(omega: (f64, f64), gamma: (f64, f64), n_omega: usize, n_gamma: usize) -> Result<Self> {
        let w = Window {
            omega_lo: omega.0,
            omega_hi: omega.1,
            gamma_lo: gamma.0,
            gamma_hi: gamma.1,
            n_omega,
            n_gamma,
            omega_scale: OmegaScale::Linear,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn log_omega(mut self) -> Result<Self> {
        self.omega_scale = OmegaScale::Log;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_lo, self.omega_hi, self.gamma_lo, self.gamma_hi]
            .iter()
            .all(|v| v.is_finite());
        if !finite
            || !(self.omega_lo < self.omega_hi)
            || !(self.gamma_lo < self.gamma_hi)
            || self.n_omega < 2
            || self.n_gamma < 2
            || self.omega_lo <= 0.0
        {
            return Err(Error::InvalidArgument(format!("invalid window {self:?}")));
        }
        Ok(())
    }

    /// Grid nodes in `omega`; geometric for a log axis.
    pub fn omega_nodes(&self) -> Vec<f64> {
        match self.omega_scale {
            OmegaScale::Linear => linspace(self.omega_lo, self.omega_hi, self.n_omega),
            OmegaScale::Log => {
                let mut v: Vec<f64> = linspace(self.omega_lo.ln(), self.omega_hi.ln(), self.n_omega)
                    .into_iter()
                    .map(f64::exp)
                    .collect();
                v[0] = self.omega_lo;
                *v.last_mut().unwrap() = self.omega_hi;
                v
            }
        }
    }

    pub fn gamma_nodes(&self) -> Vec<f64> {
        linspace(self.gamma_lo, self.gamma_hi, self.n_gamma)
    }

    pub fn d_omega(&self) -> f64 {
        (self.omega_hi - self.omega_lo) / (self.n_omega - 1) as f64
    }

    pub fn d_gamma(&self) -> f64 {
        (self.gamma_hi - self.gamma_lo) / (self.n_gamma - 1) as f64
    }

    fn divided(&self, k: usize) -> Window {
        Window { n_omega: self.n_omega / k, n_gamma: self.n_gamma / k, ..*self }
    }
}

/// The three zoom windows W1, W2, W3 with their meshes.
pub fn table1_schedule() -> Vec<Window> {
    let (w1, _) = triple_zero_point();
    vec![
        Window::new((w1 + 1e-4, 1.6656), (1.55, 1.8), 300, 1000).unwrap(),
        Window::new((0.5, 0.6), (1.57, 1.59), 200, 800).unwrap(),
        Window::new((0.55, 0.56), (1.58168, 1.58172), 400, 160).unwrap(),
    ]
}

/// [`table1_schedule`] with every mesh dimension divided by four.
pub fn reduced_schedule() -> Vec<Window> {
    table1_schedule().iter().map(|w| w.divided(4)).collect()
}

/// Patches covering `[0.001, 10] x [-10, 10]` with the meshes used for the
/// level-set figures of each case. Patches may overlap or leave out parts
/// of the rectangle where nothing changes.
pub fn figure_windows(case: CaseSigns) -> Vec<Window> {
    let w = |o: (f64, f64), g: (f64, f64), n_o: usize, n_g: usize| Window::new(o, g, n_o, n_g).unwrap();
    match case {
        CaseSigns::FF => vec![
            w((0.001, 0.0104), (-10.0, 10.0), 900, 900),
            w((0.0104, 0.603), (0.0, 10.0), 900, 900),
            w((0.0104, 0.603), (-10.0, 0.0), 900, 900),
            w((0.603, 5.0), (-10.0, 10.0), 791, 900),
            w((5.0, 10.0), (0.0, 10.0), 200, 200),
        ],
        CaseSigns::FD => vec![
            w((0.001, 0.01), (-10.0, 10.0), 450, 900),
            w((0.01, 0.0243), (0.0, 10.0), 14, 900),
            w((0.0243, 0.1102), (0.0, 10.0), 900, 900),
            w((0.1102, 1.0), (0.0, 10.0), 807, 900),
            w((0.01, 1.0), (-10.0, 0.0), 900, 900),
            w((1.0, 5.0), (0.0, 10.0), 900, 450),
            w((1.0, 10.0), (-10.0, 0.0), 900, 900),
            w((5.0, 10.0), (0.0, 10.0), 200, 100),
        ],
        CaseSigns::DF => vec![
            w((0.001, 0.025), (-10.0, 10.0), 900, 900),
            w((0.025, 5.0), (-10.0, 10.0), 896, 900),
            w((5.0, 10.0), (-10.0, 10.0), 200, 200),
        ],
        CaseSigns::DD => vec![
            w((0.001, 5.0), (-10.0, 10.0), 900, 900),
            w((5.0, 10.0), (-10.0, 10.0), 200, 200),
        ],
    }
}

/// Single log-omega window over the whole figure rectangle.
pub fn overview_window(n_omega: usize, n_gamma: usize) -> Result<Window> {
    Window::new((0.001, 10.0), (-10.0, 10.0), n_omega, n_gamma)?.log_omega()
}
