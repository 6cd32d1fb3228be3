//! Python bindings. Values cross the boundary as floats, lists and dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tripow::boundary::gamma_no_curve;
use tripow::closedform;
use tripow::potential::{classify_existence, interior_zero_count, DEFAULT_ZERO_TOL};
use tripow::profiles::{default_horizon, solve_profile, ProfileMethod, DEFAULT_DT};
use tripow::regions::{find_min_point, reduced_schedule, sweep as sweep_grid, table1_schedule, Window};
use tripow::stability::{j_with, Formula, QuadOptions};
use tripow::{CaseSigns, Error, ExistenceClass, ModelParams};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::Inadmissible { .. } | Error::NotExists(_) | Error::EmptyCurve(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn params(case: &str, omega: f64, gamma: f64) -> PyResult<ModelParams> {
    let case: CaseSigns = case.parse().map_err(to_py)?;
    ModelParams::new(case, omega, gamma).map_err(to_py)
}

fn formula(name: &str) -> PyResult<Formula> {
    match name {
        "unit" => Ok(Formula::UnitInterval),
        "x" => Ok(Formula::XForm),
        "gauge" => Ok(Formula::GaugeForm),
        "gauge-alt" => Ok(Formula::GaugeFormAlt),
        _ => Err(PyValueError::new_err(format!("unknown formula {name:?}"))),
    }
}

/// Existence class at a point: a dict with `class` and, when a wave
/// exists, `phi0`, `g_phi0` and `interior_zeros`.
#[pyfunction]
fn classify<'py>(py: Python<'py>, case: &str, omega: f64, gamma: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = params(case, omega, gamma)?;
    let d = PyDict::new(py);
    match classify_existence(&p, DEFAULT_ZERO_TOL) {
        ExistenceClass::Exists { phi0, g_at_phi0 } => {
            d.set_item("class", "exists")?;
            d.set_item("phi0", phi0)?;
            d.set_item("g_phi0", g_at_phi0)?;
            d.set_item("interior_zeros", interior_zero_count(&p).map_err(to_py)?.0)?;
        }
        ExistenceClass::BoundaryDoubleZero { t } => {
            d.set_item("class", "boundary")?;
            d.set_item("t", t)?;
        }
        ExistenceClass::NoPositiveZero => d.set_item("class", "none")?,
    }
    Ok(d)
}

/// The stability functional J.
#[pyfunction]
#[pyo3(signature = (case, omega, gamma, formula = "gauge", rel_tol = 1e-10))]
fn j(case: &str, omega: f64, gamma: f64, formula: &str, rel_tol: f64) -> PyResult<f64> {
    let p = params(case, omega, gamma)?;
    let opts = QuadOptions { rel_tol, ..QuadOptions::with_formula(self::formula(formula)?) };
    j_with(&p.coeffs(), &opts).map(|v| v.j).map_err(to_py)
}

/// Profile `(t, phi)` on `[0, t_end]`.
#[pyfunction]
#[pyo3(signature = (case, omega, gamma, method = "bvp", dt = DEFAULT_DT, t_end = None, tol = 1e-12, max_iters = 50))]
#[allow(clippy::too_many_arguments)]
fn profile(
    case: &str,
    omega: f64,
    gamma: f64,
    method: &str,
    dt: f64,
    t_end: Option<f64>,
    tol: f64,
    max_iters: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let p = params(case, omega, gamma)?;
    let method: ProfileMethod = method.parse().map_err(to_py)?;
    let t_end = t_end.unwrap_or_else(|| default_horizon(dt));
    let s = solve_profile(&p, method, t_end, dt, tol, max_iters).map_err(to_py)?;
    Ok((s.t, s.phi))
}

/// `(omega, gamma)` points of the non-existence curve for `t` in `[t_lo, t_hi]`.
#[pyfunction]
fn gamma_no(case: &str, t_lo: f64, t_hi: f64, n: usize) -> PyResult<Vec<(f64, f64)>> {
    let case: CaseSigns = case.parse().map_err(to_py)?;
    Ok(gamma_no_curve(case, t_lo, t_hi, n).map_err(to_py)?.points)
}

/// J on a grid: a dict with node vectors `omega`, `gamma` and row-major
/// `j[i_gamma][i_omega]`, `None` where no wave exists.
#[pyfunction]
#[pyo3(signature = (case, omega, gamma, n_omega = 50, n_gamma = 50, log_omega = false))]
fn sweep<'py>(
    py: Python<'py>,
    case: &str,
    omega: (f64, f64),
    gamma: (f64, f64),
    n_omega: usize,
    n_gamma: usize,
    log_omega: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let case: CaseSigns = case.parse().map_err(to_py)?;
    let mut w = Window::new(omega, gamma, n_omega, n_gamma).map_err(to_py)?;
    if log_omega {
        w = w.log_omega().map_err(to_py)?;
    }
    let field = py.detach(|| sweep_grid(case, &w));
    let rows: Vec<Vec<Option<f64>>> = field.j.chunks(n_omega).map(<[_]>::to_vec).collect();
    let d = PyDict::new(py);
    d.set_item("omega", w.omega_nodes())?;
    d.set_item("gamma", w.gamma_nodes())?;
    d.set_item("j", rows)?;
    Ok(d)
}

/// Lowest point `(omega2, gamma2)` of the F*F critical curve.
#[pyfunction]
#[pyo3(signature = (reduced = true))]
fn min_point(py: Python<'_>, reduced: bool) -> PyResult<(f64, f64)> {
    let schedule = if reduced { reduced_schedule() } else { table1_schedule() };
    let r = py.detach(|| find_min_point(CaseSigns::FF, &schedule)).map_err(to_py)?;
    Ok((r.omega2_point, r.gamma2))
}

/// `Q_p(x)`.
#[pyfunction]
fn qp(p: f64, x: f64) -> PyResult<f64> {
    if !(p > 1.0) {
        return Err(PyValueError::new_err(format!("p must exceed 1, got {p}")));
    }
    Ok(closedform::qp(p, x))
}

/// `(omega, gamma)` whose field vanishes at `a`, `b` and `(1 - ab)/(a + b)`.
#[pyfunction]
fn example35(a: f64, b: f64) -> PyResult<(f64, f64)> {
    let e = closedform::example35_coeffs(a, b).map_err(to_py)?;
    Ok((e.omega, e.gamma))
}

#[pymodule]
fn tripow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(j, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_no, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(min_point, m)?)?;
    m.add_function(wrap_pyfunction!(qp, m)?)?;
    m.add_function(wrap_pyfunction!(example35, m)?)?;
    Ok(())
}
