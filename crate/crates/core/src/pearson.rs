//! Closed-form algebra for the two-regressor case.
//!
//! Everything is parameterized by four simple-regression slopes:
//! response on each regressor (beta_y_x1, beta_y_x2) and the two
//! cross-regressions between the regressors (beta_x2_x1, beta_x1_x2),
//! whose product is the squared regressor correlation. The closed forms
//! give both multivariate coefficients directly; the attenuation
//! scenario (beta_y_x2 = 0) shows how a regressor with no marginal
//! relationship to the response still picks up a nonzero — negative —
//! coefficient, while the coefficient on the other regressor grows by
//! 1/(1-rho^2). Each formula is cross-checked in tests against the
//! general solver on exact-moment samples.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, sum_squares};
use crate::ols::fit_ols;
use crate::synth::exact_moment_sample;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PearsonScenario {
    pub beta_y_x1: f64,
    pub beta_y_x2: f64,
    pub beta_x2_x1: f64,
    pub beta_x1_x2: f64,
    /// Squared correlation of the regressors: beta_x2_x1 * beta_x1_x2.
    pub rho_sq: f64,
}

/// Outcome of checking, on one sample, that a two-coefficient fit with
/// beta_y_x2 = 0 in population collapses to a single coefficient on the
/// residualized first regressor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaIdentityReport {
    /// Population coefficient on x1 from the closed form.
    pub beta1_population: f64,
    /// Fitted multivariate coefficient on x1.
    pub beta1_fitted: f64,
    /// Sample slope of x1 on x2 used to build the residualized column.
    pub beta_x1_x2_sample: f64,
    /// Sample slope of y on x2; ~0 when the sample honors the construction.
    pub observed_beta_y_x2: f64,
    /// |observed_beta_y_x2| within tolerance of the construction's 0.
    pub construction_ok: bool,
    /// Largest unit-floored relative gap between the fitted surface and
    /// beta1_fitted * (x1 - beta_x1_x2_sample * x2) over the sample.
    pub max_pointwise_gap: f64,
    pub identity_holds: bool,
    pub tolerance: f64,
}

/// Population comparison of the simple fit on x1 against the two-regressor
/// fit when beta_y_x2 = 0: the coefficient grows by 1/(1-rho^2), the
/// fitted-value variance grows by the same factor, and the covariance of
/// the response with the residualized regressor equals the covariance
/// with the raw regressor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplificationReport {
    pub rho_sq: f64,
    pub beta_simple: f64,
    pub beta_amplified: f64,
    pub amplification_factor: f64,
    pub amplification_strict: bool,
    /// Variance of the two-regressor fitted values, via beta1^2 * V(delta).
    pub variance_delta_fit: f64,
    /// Variance of the simple fitted values: beta_simple^2 * V(x1).
    pub variance_simple_fit: f64,
    pub variance_ratio: f64,
    /// Two-regressor explained variance via the quadratic form b' Sigma b
    /// — an independent route that must agree with variance_delta_fit.
    pub explained_variance_full: f64,
    pub explained_variance_simple: f64,
    pub cov_y_delta: f64,
    pub cov_y_x1: f64,
    pub covariance_preserved: bool,
}

impl PearsonScenario {
    pub fn new(
        beta_y_x1: f64,
        beta_y_x2: f64,
        beta_x2_x1: f64,
        beta_x1_x2: f64,
    ) -> Result<PearsonScenario> {
        for v in [beta_y_x1, beta_y_x2, beta_x2_x1, beta_x1_x2] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "scenario slopes must be finite, got {v}"
                )));
            }
        }
        // Both cross-slopes share the numerator cov(x1, x2), so they are
        // zero together or carry the same sign.
        let consistent = (beta_x2_x1 == 0.0 && beta_x1_x2 == 0.0) || beta_x2_x1 * beta_x1_x2 > 0.0;
        if !consistent {
            return Err(Error::ScenarioSignMismatch {
                beta_x2_x1,
                beta_x1_x2,
            });
        }
        let rho_sq = beta_x2_x1 * beta_x1_x2;
        if rho_sq >= 1.0 {
            return Err(Error::DegenerateCorrelation(rho_sq));
        }
        Ok(PearsonScenario {
            beta_y_x1,
            beta_y_x2,
            beta_x2_x1,
            beta_x1_x2,
            rho_sq,
        })
    }

    /// Multivariate coefficient on x1:
    /// (beta_y_x1 - beta_y_x2 * beta_x2_x1) / (1 - rho^2).
    pub fn multivariate_beta1(&self) -> f64 {
        (self.beta_y_x1 - self.beta_y_x2 * self.beta_x2_x1) / (1.0 - self.rho_sq)
    }

    /// Multivariate coefficient on x2, indices swapped.
    pub fn multivariate_beta2(&self) -> f64 {
        (self.beta_y_x2 - self.beta_y_x1 * self.beta_x1_x2) / (1.0 - self.rho_sq)
    }

    /// Population covariance of (y, x1, x2) realizing the four slopes,
    /// normalized to V(x1) = 1 and unit conditional noise on y.
    pub fn covariance(&self) -> Vec<Vec<f64>> {
        let v1 = 1.0;
        let cov12 = self.beta_x2_x1 * v1;
        let v2 = if self.beta_x1_x2 == 0.0 {
            1.0
        } else {
            cov12 / self.beta_x1_x2
        };
        let cov_y1 = self.beta_y_x1 * v1;
        let cov_y2 = self.beta_y_x2 * v2;
        let (b1, b2) = (self.multivariate_beta1(), self.multivariate_beta2());
        let explained = b1 * b1 * v1 + b2 * b2 * v2 + 2.0 * b1 * b2 * cov12;
        let var_y = explained + 1.0;
        vec![
            vec![var_y, cov_y1, cov_y2],
            vec![cov_y1, v1, cov12],
            vec![cov_y2, cov12, v2],
        ]
    }

    /// Sample with columns y, x1, x2 whose sample moments equal the
    /// scenario's population moments exactly.
    pub fn exact_sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        exact_moment_sample(&self.covariance(), &["y", "x1", "x2"], n, seed)
    }
}

/// Coefficients (on x1, on x2) of the two-regressor fit when the
/// response has no marginal relationship with x2:
/// (beta_y_x1 / (1-rho^2), -beta_y_x1 * beta_x1_x2 / (1-rho^2)).
pub fn attenuation_scenario(
    beta_y_x1: f64,
    beta_x1_x2: f64,
    beta_x2_x1: f64,
) -> Result<(f64, f64)> {
    let s = PearsonScenario::new(beta_y_x1, 0.0, beta_x2_x1, beta_x1_x2)?;
    Ok((s.multivariate_beta1(), s.multivariate_beta2()))
}

/// Check on a concrete sample that the fitted surface of y on {x1, x2}
/// equals beta1 * (x1 - beta_x1_x2 * x2) when the population has
/// beta_y_x2 = 0. A sample violating the construction is reported, not
/// silently passed.
pub fn check_delta_identity(
    scenario: &PearsonScenario,
    sample: &Dataset,
    tolerance: f64,
) -> Result<DeltaIdentityReport> {
    if scenario.beta_y_x2 != 0.0 {
        return Err(Error::ScenarioNotAttenuation(scenario.beta_y_x2));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidTolerance(format!("{tolerance}")));
    }
    let fit = fit_ols(sample, "y", &["x1", "x2"])?;
    let y = sample.column("y")?;
    let x1 = sample.column("x1")?;
    let x2 = sample.column("x2")?;
    let var_x2 = sum_squares(x2);
    if var_x2 == 0.0 {
        return Err(Error::DegenerateColumn("x2".to_string()));
    }
    let beta_x1_x2_sample = dot(x1, x2) / var_x2;
    let observed_beta_y_x2 = dot(y, x2) / var_x2;
    let beta1_fitted = fit.beta[0];

    let mut max_pointwise_gap = 0.0f64;
    for i in 0..y.len() {
        let collapsed = beta1_fitted * (x1[i] - beta_x1_x2_sample * x2[i]);
        max_pointwise_gap = max_pointwise_gap.max(crate::relative_gap(fit.fitted[i], collapsed));
    }
    Ok(DeltaIdentityReport {
        beta1_population: scenario.multivariate_beta1(),
        beta1_fitted,
        beta_x1_x2_sample,
        observed_beta_y_x2,
        construction_ok: observed_beta_y_x2.abs() <= tolerance,
        max_pointwise_gap,
        identity_holds: max_pointwise_gap <= tolerance,
        tolerance,
    })
}

/// Population amplification and variance comparison for beta_y_x2 = 0.
pub fn amplification_and_variance(scenario: &PearsonScenario) -> Result<AmplificationReport> {
    if scenario.beta_y_x2 != 0.0 {
        return Err(Error::ScenarioNotAttenuation(scenario.beta_y_x2));
    }
    let rho_sq = scenario.rho_sq;
    let cov = scenario.covariance();
    let (v1, v2, cov12) = (cov[1][1], cov[2][2], cov[1][2]);
    let (cov_y1, cov_y2) = (cov[0][1], cov[0][2]);

    let beta_simple = scenario.beta_y_x1;
    let beta_amplified = scenario.multivariate_beta1();
    let amplification_factor = 1.0 / (1.0 - rho_sq);

    // V(delta) for delta = x1 - beta_x1_x2 * x2, expanded termwise.
    let b12 = scenario.beta_x1_x2;
    let var_delta = v1 - 2.0 * b12 * cov12 + b12 * b12 * v2;
    let variance_delta_fit = beta_amplified * beta_amplified * var_delta;
    let variance_simple_fit = beta_simple * beta_simple * v1;
    let variance_ratio = if variance_simple_fit == 0.0 {
        1.0
    } else {
        variance_delta_fit / variance_simple_fit
    };

    // Independent route: quadratic form with both multivariate betas.
    let b2 = scenario.multivariate_beta2();
    let explained_variance_full =
        beta_amplified * beta_amplified * v1 + b2 * b2 * v2 + 2.0 * beta_amplified * b2 * cov12;
    let explained_variance_simple = beta_simple * beta_simple * v1;

    let cov_y_delta = cov_y1 - b12 * cov_y2;
    Ok(AmplificationReport {
        rho_sq,
        beta_simple,
        beta_amplified,
        amplification_factor,
        amplification_strict: beta_amplified.abs() > beta_simple.abs(),
        variance_delta_fit,
        variance_simple_fit,
        variance_ratio,
        explained_variance_full,
        explained_variance_simple,
        cov_y_delta,
        cov_y_x1: cov_y1,
        covariance_preserved: crate::relative_gap(cov_y_delta, cov_y1) < 1e-12,
    })
}
