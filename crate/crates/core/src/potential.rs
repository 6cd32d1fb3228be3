//! The quintic potential `G`, its derivative `g`, the first positive zero
//! `phi0` and the existence test built on them.
//!
//! For the triple-power problem
//!
//! ```text
//! g(x) = w x - a1 x^2 + gamma x^3 - a3 x^4,    G(x) = int_0^x g,
//! ```
//!
//! and a standing wave exists iff `G` has a first positive zero `phi0` with
//! `g(phi0) < 0`. Everything here is evaluated for `x >= 0` on the plain
//! polynomial (no absolute values).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{positive_crossings, Crossing, Poly, RootMethod};

/// Default relative tolerance for deciding that an extremum of `2G/x^2`
/// touches zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Sign pattern `(a1, a3)` of the quadratic and quartic terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseSigns {
    /// `(+1, +1)`
    #[serde(rename = "ff")]
    FF,
    /// `(+1, -1)`
    #[serde(rename = "fd")]
    FD,
    /// `(-1, +1)`
    #[serde(rename = "df")]
    DF,
    /// `(-1, -1)`
    #[serde(rename = "dd")]
    DD,
}

impl CaseSigns {
    pub const ALL: [CaseSigns; 4] = [CaseSigns::FF, CaseSigns::FD, CaseSigns::DF, CaseSigns::DD];

    pub fn from_signs(a1: f64, a3: f64) -> Option<Self> {
        match (a1 > 0.0, a3 > 0.0) {
            _ if a1 == 0.0 || a3 == 0.0 => None,
            (true, true) => Some(CaseSigns::FF),
            (true, false) => Some(CaseSigns::FD),
            (false, true) => Some(CaseSigns::DF),
            (false, false) => Some(CaseSigns::DD),
        }
    }

    pub fn a1(self) -> f64 {
        match self {
            CaseSigns::FF | CaseSigns::FD => 1.0,
            CaseSigns::DF | CaseSigns::DD => -1.0,
        }
    }

    pub fn a3(self) -> f64 {
        match self {
            CaseSigns::FF | CaseSigns::DF => 1.0,
            CaseSigns::FD | CaseSigns::DD => -1.0,
        }
    }

    /// Label in the `F*F` notation.
    pub fn label(self) -> &'static str {
        match self {
            CaseSigns::FF => "F*F",
            CaseSigns::FD => "F*D",
            CaseSigns::DF => "D*F",
            CaseSigns::DD => "D*D",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            CaseSigns::FF => "ff",
            CaseSigns::FD => "fd",
            CaseSigns::DF => "df",
            CaseSigns::DD => "dd",
        }
    }
}

impl fmt::Display for CaseSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseSigns {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('*', "").as_str() {
            "ff" => Ok(CaseSigns::FF),
            "fd" => Ok(CaseSigns::FD),
            "df" => Ok(CaseSigns::DF),
            "dd" => Ok(CaseSigns::DD),
            _ => Err(Error::InvalidArgument(format!("unknown case {s:?}"))),
        }
    }
}

/// A point `(omega, gamma)` of the parameter half-plane for one sign case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub case: CaseSigns,
    pub omega: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(case: CaseSigns, omega: f64, gamma: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need omega > 0 and finite gamma, got ({omega}, {gamma})"
            )));
        }
        Ok(ModelParams { case, omega, gamma })
    }

    pub fn coeffs(&self) -> GeneralCoeffs {
        GeneralCoeffs {
            omega: self.omega,
            c2: self.case.a1(),
            c3: -self.gamma,
            c4: self.case.a3(),
        }
    }
}

/// `g(x) = omega x - c2 x^2 - c3 x^3 - c4 x^4`.
///
/// The triple-power family is `c2 = a1`, `c3 = -gamma`, `c4 = a3`; other
/// choices give the single- and double-power problems with known solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralCoeffs {
    pub omega: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl From<ModelParams> for GeneralCoeffs {
    fn from(p: ModelParams) -> Self {
        p.coeffs()
    }
}

impl From<&ModelParams> for GeneralCoeffs {
    fn from(p: &ModelParams) -> Self {
        p.coeffs()
    }
}

impl GeneralCoeffs {
    pub fn new(omega: f64, c2: f64, c3: f64, c4: f64) -> Self {
        GeneralCoeffs { omega, c2, c3, c4 }
    }

    /// `G(x)` as a polynomial of degree five.
    pub fn potential_poly(&self) -> Poly {
        Poly::new(vec![
            0.0,
            0.0,
            self.omega / 2.0,
            -self.c2 / 3.0,
            -self.c3 / 4.0,
            -self.c4 / 5.0,
        ])
    }

    /// `g(x)` as a polynomial of degree four.
    pub fn field_poly(&self) -> Poly {
        Poly::new(vec![0.0, self.omega, -self.c2, -self.c3, -self.c4])
    }

    /// `2 G(x) / x^2`, a cubic whose positive zeros are those of `G`.
    pub fn reduced_potential(&self) -> Poly {
        Poly::new(vec![
            self.omega,
            -2.0 * self.c2 / 3.0,
            -self.c3 / 2.0,
            -2.0 * self.c4 / 5.0,
        ])
    }

    /// `g(x) / x`, a cubic whose positive zeros are those of `g`.
    pub fn reduced_field(&self) -> Poly {
        Poly::new(vec![self.omega, -self.c2, -self.c3, -self.c4])
    }

    #[inline]
    pub fn potential(&self, x: f64) -> f64 {
        let x2 = x * x;
        x2 * (self.omega / 2.0 - x * (self.c2 / 3.0 + x * (self.c3 / 4.0 + x * self.c4 / 5.0)))
    }

    #[inline]
    pub fn field(&self, x: f64) -> f64 {
        x * (self.omega - x * (self.c2 + x * (self.c3 + x * self.c4)))
    }

    #[inline]
    pub fn field_prime(&self, x: f64) -> f64 {
        self.omega - x * (2.0 * self.c2 + x * (3.0 * self.c3 + x * 4.0 * self.c4))
    }
}

/// `G(x)` for `x >= 0`.
pub fn eval_potential(x: f64, coeffs: &GeneralCoeffs) -> f64 {
    coeffs.potential(x)
}

/// `g(x) = G'(x)` for `x >= 0`.
pub fn eval_field(x: f64, coeffs: &GeneralCoeffs) -> f64 {
    coeffs.field(x)
}

/// Outcome of the existence test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExistenceClass {
    /// `G(phi0) = 0`, `G > 0` on `(0, phi0)` and `g(phi0) < 0`.
    Exists { phi0: f64, g_at_phi0: f64 },
    /// The first positive zero `t` is a double zero: `G(t) = g(t) = 0`.
    BoundaryDoubleZero { t: f64 },
    /// `G > 0` on the whole positive axis.
    NoPositiveZero,
}

impl ExistenceClass {
    pub fn exists(&self) -> bool {
        matches!(self, ExistenceClass::Exists { .. })
    }

    pub fn phi0(&self) -> Option<f64> {
        match *self {
            ExistenceClass::Exists { phi0, .. } => Some(phi0),
            _ => None,
        }
    }
}

/// Smallest `x > 0` with `G(x) = 0`, transversal or tangent; `None` when
/// `G > 0` on the positive axis.
pub fn first_positive_zero(coeffs: &GeneralCoeffs, tol: f64) -> Option<f64> {
    first_positive_zero_with(coeffs, tol, RootMethod::ClosedForm)
}

/// [`first_positive_zero`] with an explicit root-location strategy.
pub fn first_positive_zero_with(
    coeffs: &GeneralCoeffs,
    tol: f64,
    method: RootMethod,
) -> Option<f64> {
    assert!(tol > 0.0, "tol must be positive");
    positive_crossings(&coeffs.reduced_potential(), f64::INFINITY, tol, method)
        .first()
        .map(|c| c.x())
}

/// Threshold on `|g(phi0)|` below which `phi0` counts as a double zero.
pub fn double_zero_threshold(omega: f64, phi0: f64) -> f64 {
    1e-9 * (1.0 + omega * phi0)
}

pub fn classify_coeffs(coeffs: &GeneralCoeffs, tol: f64) -> ExistenceClass {
    let Some(phi0) = first_positive_zero(coeffs, tol) else {
        return ExistenceClass::NoPositiveZero;
    };
    let g0 = coeffs.field(phi0);
    let thr = double_zero_threshold(coeffs.omega, phi0);
    if g0 < -thr {
        ExistenceClass::Exists { phi0, g_at_phi0: g0 }
    } else if g0.abs() <= thr {
        ExistenceClass::BoundaryDoubleZero { t: phi0 }
    } else {
        ExistenceClass::NoPositiveZero
    }
}

/// The existence test (first positive zero exists and `g(phi0) < 0`).
pub fn classify_existence(params: &ModelParams, tol: f64) -> ExistenceClass {
    classify_coeffs(&params.coeffs(), tol)
}

fn require_exists(coeffs: &GeneralCoeffs) -> Result<(f64, f64)> {
    match classify_coeffs(coeffs, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, g_at_phi0 } => Ok((phi0, g_at_phi0)),
        other => Err(Error::NotExists(other)),
    }
}

/// `(d phi0 / d omega, d phi0 / d gamma)` by implicit differentiation of
/// `G(phi0) = 0`. Both are positive on the existence region.
pub fn phi0_partials(params: &ModelParams) -> Result<(f64, f64)> {
    let (phi0, g0) = require_exists(&params.coeffs())?;
    Ok((phi0 * phi0 / (-2.0 * g0), phi0.powi(4) / (-4.0 * g0)))
}

/// Zeros of `g` inside `(0, phi0)`. Tangential zeros are reported once.
pub fn interior_zero_count(params: &ModelParams) -> Result<(usize, Vec<f64>)> {
    interior_zeros_coeffs(&params.coeffs())
}

pub fn interior_zeros_coeffs(coeffs: &GeneralCoeffs) -> Result<(usize, Vec<f64>)> {
    let (phi0, _) = require_exists(coeffs)?;
    let zeros: Vec<f64> = positive_crossings(
        &coeffs.reduced_field(),
        phi0,
        DEFAULT_ZERO_TOL,
        RootMethod::ClosedForm,
    )
    .into_iter()
    .map(Crossing::x)
    .filter(|&x| x < phi0)
    .collect();
    Ok((zeros.len(), zeros))
}
