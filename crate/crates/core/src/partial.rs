//! Residualization and the equivalence between multivariate coefficients
//! and univariate regressions on residualized variables.
//!
//! The central identity: regress the focus column on the controls, keep
//! the residual Δ, and the simple-regression slope of the response on Δ
//! reproduces the focus coefficient of the full multivariate fit. It holds
//! whether the response is used raw (`prt_v1`) or itself residualized on
//! the controls (`prt_v2`). `decompose` packages the identity per
//! regressor together with the associated correlation measures.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, sum_squares};
use crate::ols::fit_ols;
use serde::{Deserialize, Serialize};

/// Residual variance below (1e-10)^2 of the original column's variance
/// counts as fully explained by the controls.
const RESIDUAL_VARIANCE_FLOOR: f64 = 1e-20;

/// One regressor's view of a multivariate fit: its residualized column,
/// the three routes to its coefficient, and its correlation measures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialDecomposition {
    pub focus: String,
    pub controls: Vec<String>,
    pub delta: Vec<f64>,
    pub beta_multivariate: f64,
    pub beta_prt_v1: f64,
    pub beta_prt_v2: f64,
    pub semi_partial_r2: f64,
    pub partial_r2: f64,
    pub partial_correlation: f64,
}

fn check_target_not_in_controls<S: AsRef<str>>(target: &str, controls: &[S]) -> Result<()> {
    if controls.iter().any(|c| c.as_ref() == target) {
        return Err(Error::TargetInControls(target.to_string()));
    }
    Ok(())
}

fn check_response_apart<S: AsRef<str>>(response: &str, focus: &str, controls: &[S]) -> Result<()> {
    if response == focus || controls.iter().any(|c| c.as_ref() == response) {
        return Err(Error::ResponseIsRegressor(response.to_string()));
    }
    Ok(())
}

/// Target column minus its least-squares projection on the controls.
/// Empty controls return the column unchanged.
pub fn residualize<S: AsRef<str>>(
    data: &Dataset,
    target: &str,
    controls: &[S],
) -> Result<Vec<f64>> {
    if !data.is_centered() {
        return Err(Error::NotCentered);
    }
    check_target_not_in_controls(target, controls)?;
    let col = data.column(target)?;
    if controls.is_empty() {
        return Ok(col.to_vec());
    }
    if sum_squares(col) == 0.0 {
        // Projecting the zero vector: nothing to fit.
        return Ok(vec![0.0; col.len()]);
    }
    Ok(fit_ols(data, target, controls)?.residuals)
}

/// Residualized focus column, rejected if the controls absorb it.
fn residualized_focus<S: AsRef<str>>(
    data: &Dataset,
    focus: &str,
    controls: &[S],
) -> Result<Vec<f64>> {
    let delta = residualize(data, focus, controls)?;
    let original = sum_squares(data.column(focus)?);
    if sum_squares(&delta) <= RESIDUAL_VARIANCE_FLOOR * original {
        return Err(Error::CollinearFocus(focus.to_string()));
    }
    Ok(delta)
}

/// Residualized response column, rejected if the controls absorb it.
fn residualized_response<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    controls: &[S],
) -> Result<Vec<f64>> {
    let resid = residualize(data, response, controls)?;
    let original = sum_squares(data.column(response)?);
    if sum_squares(&resid) <= RESIDUAL_VARIANCE_FLOOR * original {
        return Err(Error::ControlsExplainResponse(response.to_string()));
    }
    Ok(resid)
}

/// Slope of the raw response on the residualized focus. Equals the focus
/// coefficient of the multivariate fit on {focus} ∪ controls.
pub fn prt_v1<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    focus: &str,
    controls: &[S],
) -> Result<f64> {
    check_response_apart(response, focus, controls)?;
    let delta = residualized_focus(data, focus, controls)?;
    let y = data.column(response)?;
    Ok(dot(y, &delta) / sum_squares(&delta))
}

/// Slope of the residualized response on the residualized focus. Same
/// value as `prt_v1`: the part of the response removed here lies in the
/// span of the controls, which Δ is orthogonal to.
pub fn prt_v2<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    focus: &str,
    controls: &[S],
) -> Result<f64> {
    check_response_apart(response, focus, controls)?;
    let delta = residualized_focus(data, focus, controls)?;
    let y_resid = residualize(data, response, controls)?;
    Ok(dot(&y_resid, &delta) / sum_squares(&delta))
}

/// Squared correlation of the raw response with the residualized focus;
/// equals the gain in full-model R² from adding the focus to the controls.
pub fn semi_partial_r2<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    focus: &str,
    controls: &[S],
) -> Result<f64> {
    check_response_apart(response, focus, controls)?;
    let delta = residualized_focus(data, focus, controls)?;
    let y = data.column(response)?;
    let var_y = sum_squares(y);
    if var_y == 0.0 {
        return Err(Error::DegenerateResponse(response.to_string()));
    }
    let c = dot(y, &delta);
    Ok((c * c / (var_y * sum_squares(&delta))).clamp(0.0, 1.0))
}

/// Squared correlation of the residualized response with the residualized
/// focus: the share of still-unexplained response variance the focus picks up.
pub fn partial_r2<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    focus: &str,
    controls: &[S],
) -> Result<f64> {
    check_response_apart(response, focus, controls)?;
    let delta = residualized_focus(data, focus, controls)?;
    let y_resid = residualized_response(data, response, controls)?;
    let c = dot(&y_resid, &delta);
    Ok((c * c / (sum_squares(&y_resid) * sum_squares(&delta))).clamp(0.0, 1.0))
}

/// Signed correlation between two columns after both are residualized on
/// the controls. Symmetric in its two arguments, bit for bit.
pub fn partial_correlation<S: AsRef<str>>(
    data: &Dataset,
    a: &str,
    b: &str,
    controls: &[S],
) -> Result<f64> {
    let a_resid = residualized_focus(data, a, controls)?;
    let b_resid = residualized_focus(data, b, controls)?;
    let r = dot(&a_resid, &b_resid) / (sum_squares(&a_resid).sqrt() * sum_squares(&b_resid).sqrt());
    Ok(r.clamp(-1.0, 1.0))
}

/// Per-regressor breakdown of one multivariate fit. Each record treats
/// its regressor as the focus and the remaining regressors as controls;
/// `beta_multivariate` comes from a single shared fit.
///
/// The correlation measures share the inner product ⟨y, Δ⟩ (equal to
/// ⟨y_resid, Δ⟩ by orthogonality), and the residual variance of y is
/// capped at the raw variance, so semi_partial_r2 ≤ partial_r2 holds
/// structurally rather than up to rounding.
pub fn decompose<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    regressors: &[S],
) -> Result<Vec<PartialDecomposition>> {
    let fit = fit_ols(data, response, regressors)?;
    let y = data.column(response)?;
    let var_y = sum_squares(y);
    let mut records = Vec::with_capacity(fit.regressor_names.len());
    for (j, focus) in fit.regressor_names.iter().enumerate() {
        let controls: Vec<String> = fit
            .regressor_names
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != j)
            .map(|(_, name)| name.clone())
            .collect();

        let delta = residualized_focus(data, focus, &controls)?;
        let y_resid = residualized_response(data, response, &controls)?;
        let var_delta = sum_squares(&delta);
        let var_y_resid = sum_squares(&y_resid).min(var_y);

        let c = dot(y, &delta);
        let pc = (c / (var_y_resid.sqrt() * var_delta.sqrt())).clamp(-1.0, 1.0);
        let sc = (c / (var_y.sqrt() * var_delta.sqrt())).clamp(-1.0, 1.0);

        records.push(PartialDecomposition {
            focus: focus.clone(),
            controls,
            beta_multivariate: fit.beta[j],
            beta_prt_v1: c / var_delta,
            beta_prt_v2: dot(&y_resid, &delta) / var_delta,
            semi_partial_r2: sc * sc,
            partial_r2: pc * pc,
            partial_correlation: pc,
            delta,
        });
    }
    Ok(records)
}
