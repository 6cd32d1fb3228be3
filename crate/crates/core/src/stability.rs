//! The stability functional `J(omega, gamma)`, the derivative in `omega` of
//! the mass of the standing wave, written as a one-dimensional integral over
//! the phase-plane orbit.
//!
//! All integrands below have an inverse square-root singularity at
//! `x = phi0`. Writing `G(x) = x^2 (phi0 - x) P(x)` with `P > 0` on
//! `[0, phi0]`, that factor is taken out analytically and the rest is
//! integrated with `x = phi0 (1 - u^2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::potential::{classify_coeffs, ExistenceClass, GeneralCoeffs, ModelParams, DEFAULT_ZERO_TOL};
use crate::quadrature::{integrate, integrate_pieces, QuadResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Formula {
    /// Fixed domain `s in (0, 1)`.
    UnitInterval,
    /// `s = x^2`.
    XForm,
    /// `x`-form plus a total derivative with `A(x) = x^4 - phi0 x^3`.
    #[default]
    GaugeForm,
    /// Same with `A(x) = phi0^2 x^2 - phi0 x^3`.
    GaugeFormAlt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    /// Maximum bisection depth of any panel.
    pub max_refinements: u32,
    pub formula: Formula,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-10, max_refinements: 30, formula: Formula::GaugeForm }
    }
}

impl QuadOptions {
    pub fn with_formula(formula: Formula) -> Self {
        QuadOptions { formula, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityValue {
    pub j: f64,
    pub formula_used: Formula,
    pub est_error: f64,
    pub phi0: f64,
    /// `int |integrand|` times the prefactor; the tolerance is relative to
    /// this, since `J` itself crosses zero.
    pub scale: f64,
    /// Zeros of `g` in `(0, phi0)`.
    pub interior_zeros: usize,
}

/// `U(s) = 2 G(sqrt s)` and `U'(s) = g(sqrt s) / sqrt s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UForm {
    /// `phi0^2`, the first positive zero of `U`.
    pub a: f64,
    coeffs: GeneralCoeffs,
}

impl UForm {
    pub fn new(coeffs: &GeneralCoeffs) -> Result<Self> {
        let (phi0, _) = exists(coeffs)?;
        Ok(UForm { a: phi0 * phi0, coeffs: *coeffs })
    }

    pub fn u(&self, s: f64) -> f64 {
        2.0 * self.coeffs.potential(s.sqrt())
    }

    pub fn u_prime(&self, s: f64) -> f64 {
        let x = s.sqrt();
        self.coeffs.omega - x * (self.coeffs.c2 + x * (self.coeffs.c3 + x * self.coeffs.c4))
    }
}

fn exists(c: &GeneralCoeffs) -> Result<(f64, f64)> {
    match classify_coeffs(c, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, g_at_phi0 } => Ok((phi0, g_at_phi0)),
        other => Err(Error::NotExists(other)),
    }
}

/// Pieces of the factorisation shared by all forms.
struct Factored {
    phi0: f64,
    g0: f64,
    /// `G(x) = x^2 (phi0 - x) P(x)`.
    p: Poly,
    interior_zeros: usize,
}

impl Factored {
    fn new(c: &GeneralCoeffs) -> Result<Self> {
        let (phi0, g0) = exists(c)?;
        let (q, _) = c.reduced_potential().deflate(phi0);
        let p = q.scale(-0.5);
        let interior_zeros = crate::potential::interior_zeros_coeffs(c).map(|r| r.0).unwrap_or(0);
        Ok(Factored { phi0, g0, p, interior_zeros })
    }

    /// `M` with `numerator(x) = x^3 (phi0 - x) M(x)`.
    fn reduce(&self, numerator: &Poly) -> Poly {
        let (m, _) = numerator.shift_down(3).deflate(self.phi0);
        m.scale(-1.0)
    }

    /// `prefactor * int_0^phi0 N / G^(3/2) dx` for a numerator divisible by
    /// `x^3 (phi0 - x)`.
    fn integrate_numerator(&self, numerator: &Poly, prefactor: f64, opts: &QuadOptions) -> QuadResult {
        let m = self.reduce(numerator);
        let phi0 = self.phi0;
        let k = 2.0 * phi0.sqrt();
        let f = |u: f64| {
            let x = phi0 * (1.0 - u * u);
            let p = self.p.eval(x);
            k * m.eval(x) / (p * p.sqrt())
        };
        scaled(integrate(f, 0.0, 1.0, opts.rel_tol, opts.max_refinements), prefactor)
    }

    fn finish(&self, r: QuadResult, formula: Formula) -> Result<StabilityValue> {
        if !r.converged {
            return Err(Error::QuadratureNonConvergent { partial: r.value, est_error: r.est_error });
        }
        Ok(StabilityValue {
            j: r.value,
            formula_used: formula,
            est_error: r.est_error,
            phi0: self.phi0,
            scale: r.abs_integral,
            interior_zeros: self.interior_zeros,
        })
    }
}

fn scaled(r: QuadResult, k: f64) -> QuadResult {
    QuadResult {
        value: r.value * k,
        est_error: r.est_error * k.abs(),
        abs_integral: r.abs_integral * k.abs(),
        ..r
    }
}

pub fn j_unit_interval(params: &ModelParams, opts: &QuadOptions) -> Result<StabilityValue> {
    j_unit_interval_coeffs(&params.coeffs(), opts)
}

pub fn j_unit_interval_coeffs(c: &GeneralCoeffs, opts: &QuadOptions) -> Result<StabilityValue> {
    let fac = Factored::new(c)?;
    let phi0 = fac.phi0;
    // (h(phi0) - h(y)) / (phi0 - y) with h = g / x.
    let (dh, _) = c.reduced_field().deflate(phi0);
    let core = |y: f64, phi0_minus_y: f64| {
        let p = fac.p.eval(y);
        (3.0 + dh.eval(y) / (2.0 * p)) / (phi0 * (2.0 * phi0_minus_y * p).sqrt())
    };
    // s = v^2 on [0, 1/2] and s = 1 - u^2 on [1/2, 1], both v, u in
    // [0, 1/sqrt2]; the second piece is stored on [1/sqrt2, 2/sqrt2].
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let f = |w: f64| {
        if w <= r {
            let y = phi0 * w;
            2.0 * w * core(y, phi0 - y)
        } else {
            let u = 2.0 * r - w;
            let s = 1.0 - u * u;
            let rs = s.sqrt();
            let y = phi0 * rs;
            let p = fac.p.eval(y);
            // phi0 - y = phi0 u^2 / (1 + sqrt s); the u from ds cancels.
            let d = phi0 / (1.0 + rs);
            2.0 * (3.0 + dh.eval(y) / (2.0 * p)) / (phi0 * (2.0 * d * p).sqrt())
        }
    };
    let res = integrate_pieces(&f, &[0.0, r, 2.0 * r], opts.rel_tol, opts.max_refinements);
    let res = scaled(res, -phi0.powi(4) / (2.0 * fac.g0));
    fac.finish(res, Formula::UnitInterval)
}

pub fn j_x_form(params: &ModelParams, opts: &QuadOptions) -> Result<StabilityValue> {
    j_x_form_coeffs(&params.coeffs(), opts)
}

pub fn j_x_form_coeffs(c: &GeneralCoeffs, opts: &QuadOptions) -> Result<StabilityValue> {
    let fac = Factored::new(c)?;
    let (phi0, g0) = (fac.phi0, fac.g0);
    // 6 phi0 x^2 G + x^4 g0 - phi0 x^3 g
    let n = &(&c.potential_poly().shift_up(2).scale(6.0 * phi0) + &Poly::monomial(g0, 4))
        - &c.field_poly().shift_up(3).scale(phi0);
    let r = fac.integrate_numerator(&n, -std::f64::consts::SQRT_2 / (4.0 * g0), opts);
    fac.finish(r, Formula::XForm)
}

pub fn j_gauge_form(params: &ModelParams, opts: &QuadOptions) -> Result<StabilityValue> {
    j_gauge_form_coeffs(&params.coeffs(), opts)
}

pub fn j_gauge_form_coeffs(c: &GeneralCoeffs, opts: &QuadOptions) -> Result<StabilityValue> {
    let fac = Factored::new(c)?;
    let g0 = fac.g0;
    // 8 x^3 G + x^4 g0 - x^4 g
    let n = &(&c.potential_poly().shift_up(3).scale(8.0) + &Poly::monomial(g0, 4))
        - &c.field_poly().shift_up(4);
    let r = fac.integrate_numerator(&n, -std::f64::consts::SQRT_2 / (4.0 * g0), opts);
    fac.finish(r, Formula::GaugeForm)
}

pub fn j_gauge_form_alt(params: &ModelParams, opts: &QuadOptions) -> Result<StabilityValue> {
    j_gauge_form_alt_coeffs(&params.coeffs(), opts)
}

pub fn j_gauge_form_alt_coeffs(c: &GeneralCoeffs, opts: &QuadOptions) -> Result<StabilityValue> {
    let fac = Factored::new(c)?;
    let (phi0, g0) = (fac.phi0, fac.g0);
    // 4 phi0^2 x G + x^4 g0 - phi0^2 x^2 g
    let n = &(&c.potential_poly().shift_up(1).scale(4.0 * phi0 * phi0) + &Poly::monomial(g0, 4))
        - &c.field_poly().shift_up(2).scale(phi0 * phi0);
    let r = fac.integrate_numerator(&n, -std::f64::consts::SQRT_2 / (4.0 * g0), opts);
    fac.finish(r, Formula::GaugeFormAlt)
}

/// `J` by the formula selected in `opts`.
pub fn j_with(c: &GeneralCoeffs, opts: &QuadOptions) -> Result<StabilityValue> {
    match opts.formula {
        Formula::UnitInterval => j_unit_interval_coeffs(c, opts),
        Formula::XForm => j_x_form_coeffs(c, opts),
        Formula::GaugeForm => j_gauge_form_coeffs(c, opts),
        Formula::GaugeFormAlt => j_gauge_form_alt_coeffs(c, opts),
    }
}

/// `J` with default options.
pub fn j(params: &ModelParams) -> Result<StabilityValue> {
    j_with(&params.coeffs(), &QuadOptions::default())
}
