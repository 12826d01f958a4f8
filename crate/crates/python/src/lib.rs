//! Python bindings: thin shims over the `partialreg` crate.
//!
//! Columns arrive as a dict of `name -> list[float]` and are centered on
//! entry, so results line up with the CLI. Validation problems raise
//! `ValueError`; numerically degenerate inputs (rank deficiency, constant
//! columns, correlations pinned at 1) raise `ArithmeticError` — the same
//! split the CLI expresses as exit codes 2 and 3.

use std::path::PathBuf;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use partialreg::{Dataset, PearsonScenario, SimulationSpec};

fn to_py_err(e: partialreg::Error) -> PyErr {
    if e.is_degeneracy() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Dict of columns -> centered dataset, preserving insertion order.
fn dataset_from_dict(columns: &Bound<'_, PyDict>) -> PyResult<Dataset> {
    let mut names: Vec<String> = Vec::with_capacity(columns.len());
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for (key, value) in columns.iter() {
        names.push(key.extract()?);
        cols.push(value.extract()?);
    }
    Dataset::new(names, cols)
        .and_then(|d| d.center())
        .map_err(to_py_err)
}

/// Least-squares fit of `response` on `regressors` after centering.
///
/// Returns a dict with the coefficients, the intercept implied by the
/// removed means, fit quality, and the fitted/residual vectors.
#[pyfunction]
fn fit<'py>(
    py: Python<'py>,
    columns: &Bound<'py, PyDict>,
    response: &str,
    regressors: Vec<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let data = dataset_from_dict(columns)?;
    let fit = partialreg::fit_ols(&data, response, &regressors).map_err(to_py_err)?;
    let intercept = fit.implied_intercept(&data).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("response", &fit.response_name)?;
    out.set_item("regressors", &fit.regressor_names)?;
    out.set_item("beta", &fit.beta)?;
    out.set_item("implied_intercept", intercept)?;
    out.set_item("r_squared", fit.r_squared)?;
    out.set_item("rank", fit.rank)?;
    out.set_item("condition_estimate", fit.condition_estimate)?;
    out.set_item("fitted", &fit.fitted)?;
    out.set_item("residuals", &fit.residuals)?;
    Ok(out)
}

/// Per-regressor ledger of the fit: each coefficient recomputed as the
/// slope on its residualized column, plus the correlation measures.
#[pyfunction]
fn decompose<'py>(
    py: Python<'py>,
    columns: &Bound<'py, PyDict>,
    response: &str,
    regressors: Vec<String>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let data = dataset_from_dict(columns)?;
    let rows = partialreg::decompose(&data, response, &regressors).map_err(to_py_err)?;
    rows.iter()
        .map(|row| {
            let out = PyDict::new(py);
            out.set_item("focus", &row.focus)?;
            out.set_item("controls", &row.controls)?;
            out.set_item("delta", &row.delta)?;
            out.set_item("beta_multivariate", row.beta_multivariate)?;
            out.set_item("beta_prt_v1", row.beta_prt_v1)?;
            out.set_item("beta_prt_v2", row.beta_prt_v2)?;
            out.set_item("semi_partial_r2", row.semi_partial_r2)?;
            out.set_item("partial_r2", row.partial_r2)?;
            out.set_item("partial_correlation", row.partial_correlation)?;
            Ok(out)
        })
        .collect()
}

/// `target` minus its least-squares projection on `controls`.
#[pyfunction]
fn residualize(
    columns: &Bound<'_, PyDict>,
    target: &str,
    controls: Vec<String>,
) -> PyResult<Vec<f64>> {
    let data = dataset_from_dict(columns)?;
    partialreg::residualize(&data, target, &controls).map_err(to_py_err)
}

/// Signed correlation of two columns after both are residualized on the
/// controls; symmetric in `a` and `b`.
#[pyfunction]
fn partial_correlation(
    columns: &Bound<'_, PyDict>,
    a: &str,
    b: &str,
    controls: Vec<String>,
) -> PyResult<f64> {
    let data = dataset_from_dict(columns)?;
    partialreg::partial_correlation(&data, a, b, &controls).map_err(to_py_err)
}

/// Two-regressor coefficients implied by four simple slopes.
///
/// `beta_x1_x2` defaults to `beta_x2_x1` (equal variances).
#[pyfunction]
#[pyo3(signature = (beta_y_x1, beta_y_x2, beta_x2_x1, beta_x1_x2=None))]
fn pearson_closed_forms(
    beta_y_x1: f64,
    beta_y_x2: f64,
    beta_x2_x1: f64,
    beta_x1_x2: Option<f64>,
) -> PyResult<(f64, f64)> {
    let s = PearsonScenario::new(
        beta_y_x1,
        beta_y_x2,
        beta_x2_x1,
        beta_x1_x2.unwrap_or(beta_x2_x1),
    )
    .map_err(to_py_err)?;
    Ok((s.multivariate_beta1(), s.multivariate_beta2()))
}

/// Coefficients (on x1, on x2) when the response has no marginal
/// relationship with x2: the slope on x1 grows by 1/(1 - rho^2) and x2
/// picks up the compensating negative coefficient.
#[pyfunction]
fn attenuation_coefficients(
    beta_y_x1: f64,
    beta_x1_x2: f64,
    beta_x2_x1: f64,
) -> PyResult<(f64, f64)> {
    partialreg::attenuation_scenario(beta_y_x1, beta_x1_x2, beta_x2_x1).map_err(to_py_err)
}

/// Columns of a sample whose SAMPLE covariance equals `covariance`
/// exactly, as a dict keyed by `names`.
#[pyfunction]
fn exact_moment_sample<'py>(
    py: Python<'py>,
    covariance: Vec<Vec<f64>>,
    names: Vec<String>,
    n: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let data = partialreg::exact_moment_sample(&covariance, &names, n, seed).map_err(to_py_err)?;
    let out = PyDict::new(py);
    for name in data.names() {
        out.set_item(name, data.column(name).map_err(to_py_err)?)?;
    }
    Ok(out)
}

/// Run the seeded simulator from a TOML spec string and report fitted
/// coefficients against the population best-fit target.
///
/// Keys: k, sigma_xx, beta, sigma_eps, sigma_x_eps, n, seed. `seed`
/// overrides the spec; `output_csv` writes the generated sample.
#[pyfunction]
#[pyo3(signature = (spec_toml, seed=None, output_csv=None))]
fn simulate<'py>(
    py: Python<'py>,
    spec_toml: &str,
    seed: Option<u64>,
    output_csv: Option<PathBuf>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut spec = SimulationSpec::from_toml_str(spec_toml).map_err(to_py_err)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let (data, _) = partialreg::generate(&spec).map_err(to_py_err)?;
    if let Some(path) = &output_csv {
        partialreg::write_csv(path, &data).map_err(to_py_err)?;
    }
    let names: Vec<String> = data.names().iter().skip(1).cloned().collect();
    let fit = partialreg::fit_ols(&data, "y", &names).map_err(to_py_err)?;
    let report = partialreg::bias_report(&spec, &fit).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("n", report.n)?;
    out.set_item("k", report.k)?;
    out.set_item("seed", spec.seed)?;
    out.set_item("exogenous", report.exogenous)?;
    out.set_item("beta", &report.beta_structural)?;
    out.set_item("gamma_hat", &report.gamma_hat)?;
    out.set_item("gamma_population", &report.gamma_population)?;
    out.set_item("analytic_bias", &report.analytic_bias)?;
    out.set_item("max_gap", report.max_gap)?;
    out.set_item("r_squared", report.r_squared)?;
    out.set_item("note", &report.note)?;
    Ok(out)
}

#[pymodule]
fn partialreg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(residualize, m)?)?;
    m.add_function(wrap_pyfunction!(partial_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(pearson_closed_forms, m)?)?;
    m.add_function(wrap_pyfunction!(attenuation_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(exact_moment_sample, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
