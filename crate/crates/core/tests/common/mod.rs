#![allow(dead_code)]

use proptest::prelude::*;
use tripow::potential::{classify_existence, DEFAULT_ZERO_TOL};
use tripow::{CaseSigns, ModelParams};

pub fn any_case() -> impl Strategy<Value = CaseSigns> {
    prop::sample::select(CaseSigns::ALL.to_vec())
}

/// `omega` log-uniform on `[lo, hi]`.
pub fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

/// A parameter point of `case` where a wave exists, with `phi0`.
pub fn exists_in(
    case: impl Strategy<Value = CaseSigns>,
    omega: (f64, f64),
    gamma: (f64, f64),
) -> impl Strategy<Value = (ModelParams, f64)> {
    (case, log_uniform(omega.0, omega.1), gamma.0..gamma.1).prop_filter_map("no wave", |(case, o, g)| {
        let p = ModelParams::new(case, o, g).ok()?;
        classify_existence(&p, DEFAULT_ZERO_TOL).phi0().map(|phi0| (p, phi0))
    })
}

pub fn exists_point() -> impl Strategy<Value = (ModelParams, f64)> {
    exists_in(any_case(), (0.01, 5.0), (-6.0, 6.0))
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
