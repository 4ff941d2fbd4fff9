//! Python bindings: `import pykosh`.

// the pyfunction macro expands `?` into PyErr → PyErr conversions
#![allow(clippy::useless_conversion)]

use koshliakov::campaign::{evaluate, run_campaign, CampaignConfig, Case, Formula, DEFAULT_TABLE_SIZE};
use koshliakov::eigen::{self, Params};
use koshliakov::kernels;
use koshliakov::report::{Tolerance, VerificationReport};
use koshliakov::zeta::{self, ZetaValue};
use koshliakov::{Complex64, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_)
        | Error::Config(_)
        | Error::UnknownPreset(_)
        | Error::HypothesisViolation { .. }
        | Error::HypothesisUnmet { .. }
        | Error::NearPole { .. }
        | Error::PoleAtP { .. }
        | Error::DivergesAtZero { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn params(p: f64) -> PyResult<Params> {
    Params::new(p).map_err(to_py)
}

fn table(p: f64, n_max: usize) -> PyResult<(Params, eigen::EigenTable)> {
    let params = params(p)?;
    let t = eigen::eigen_table(&params, n_max, 1e-15).map_err(to_py)?;
    Ok((params, t))
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<PyObject> {
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

fn report_to_py(py: Python<'_>, r: &VerificationReport) -> PyResult<PyObject> {
    json_to_py(py, &r.to_json())
}

/// Roots λ_1..λ_n_max as (n, lambda, residual) tuples.
#[pyfunction]
fn eigen_table(p: f64, n_max: usize) -> PyResult<Vec<(usize, f64, f64)>> {
    let (_, t) = table(p, n_max)?;
    Ok(t.roots.iter().map(|r| (r.n, r.lambda, r.residual)).collect())
}

#[pyfunction]
fn solve_lambda(p: f64, n: usize) -> PyResult<f64> {
    eigen::solve_lambda(&params(p)?, n, 1e-15).map_err(to_py)
}

#[pyfunction]
fn weight(p: f64, lam: f64) -> PyResult<f64> {
    Ok(eigen::weight(&params(p)?, lam))
}

/// K(z) = 1/(σ(z)e^{2πz} − 1).
#[pyfunction]
fn kernel_k(p: f64, z: Complex64) -> PyResult<Complex64> {
    Ok(kernels::kernel_k(&params(p)?, z).map_err(to_py)?.value)
}

/// The partial-fraction expansion of K over n_max eigenvalues.
#[pyfunction]
#[pyo3(signature = (p, z, n_max=DEFAULT_TABLE_SIZE, tail_tol=1e-9))]
fn kernel_k_partial_fraction(p: f64, z: Complex64, n_max: usize, tail_tol: f64) -> PyResult<Complex64> {
    let (params, t) = table(p, n_max)?;
    Ok(kernels::kernel_k_partial_fraction(&params, z, &t, tail_tol).map_err(to_py)?.value)
}

/// σ_p(z) = Σ w_j e^{−λ_j z} for z > 0.
#[pyfunction]
#[pyo3(signature = (p, z, n_max=DEFAULT_TABLE_SIZE, tol=1e-14))]
fn sigma_p(p: f64, z: f64, n_max: usize, tol: f64) -> PyResult<f64> {
    let (params, t) = table(p, n_max)?;
    kernels::sigma_p(&params, z, &t, tol).map_err(to_py)
}

fn zeta_tuple(v: ZetaValue) -> (Complex64, f64) {
    (v.value, v.error_estimate)
}

/// η_p(s) as (value, error estimate); method is "integral" or "series".
#[pyfunction]
#[pyo3(signature = (s, p, method="integral", tol=1e-12))]
fn eta_p(s: Complex64, p: f64, method: &str, tol: f64) -> PyResult<(Complex64, f64)> {
    let params = params(p)?;
    let v = match method {
        "integral" => zeta::eta_p_integral(&params, s, tol),
        "series" => zeta::eta_p_series(&params, s, tol),
        other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
    };
    v.map(zeta_tuple).map_err(to_py)
}

/// ζ_p(s) for Re s > 1 as (value, error estimate).
#[pyfunction]
#[pyo3(signature = (s, p, n_max=DEFAULT_TABLE_SIZE, tol=1e-12))]
fn zeta_p(s: Complex64, p: f64, n_max: usize, tol: f64) -> PyResult<(Complex64, f64)> {
    let (params, t) = table(p, n_max)?;
    zeta::zeta_p_series(&params, s, &t, tol).map(zeta_tuple).map_err(to_py)
}

/// ζ_p(−2m − 1) from the functional equation.
#[pyfunction]
#[pyo3(signature = (m, p, tol=1e-12))]
fn zeta_p_odd_negative(m: u32, p: f64, tol: f64) -> PyResult<(Complex64, f64)> {
    zeta::zeta_p_via_functional_eq(&params(p)?, m, tol).map(zeta_tuple).map_err(to_py)
}

/// Checks one identity and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (formula, *, p=None, function=None, w=None, z=None, n=None, alpha=None, beta=None, m=None,
                    atol=1e-9, rtol=1e-9, n_max=DEFAULT_TABLE_SIZE))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    formula: &str,
    p: Option<f64>,
    function: Option<String>,
    w: Option<f64>,
    z: Option<f64>,
    n: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    m: Option<u32>,
    atol: f64,
    rtol: f64,
    n_max: usize,
) -> PyResult<PyObject> {
    let formula: Formula = formula.parse().map_err(to_py)?;
    let case = Case { formula: Some(formula), p, function, w, z, n, alpha, beta, m };
    let tol = Tolerance::new(atol, rtol).map_err(to_py)?;
    let t = match p {
        Some(p) if formula.uses_p() => Some(table(p, n_max)?.1),
        _ => None,
    };
    let r = py.allow_threads(|| evaluate(&case, t.as_ref(), &tol)).map_err(to_py)?;
    report_to_py(py, &r)
}

/// Runs a campaign from TOML text (the standard grid if omitted) and returns its reports.
#[pyfunction]
#[pyo3(signature = (config=None, threads=None))]
fn campaign(py: Python<'_>, config: Option<&str>, threads: Option<usize>) -> PyResult<Vec<PyObject>> {
    let cfg = match config {
        Some(text) => CampaignConfig::from_toml(text).map_err(to_py)?,
        None => CampaignConfig::standard(),
    };
    let result = py.allow_threads(|| run_campaign(&cfg, threads)).map_err(to_py)?;
    result.reports().iter().map(|r| report_to_py(py, r)).collect()
}

#[pymodule]
fn pykosh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eigen_table, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_k, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_k_partial_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_p, m)?)?;
    m.add_function(wrap_pyfunction!(eta_p, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_p, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_p_odd_negative, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(campaign, m)?)?;
    Ok(())
}
