//! Centered least squares.
//!
//! `fit_ols` solves with column-pivoted Householder QR. The
//! `normal_equations_oracle` solves (X'X)b = X'Y by Gaussian elimination
//! and deliberately shares no solver code with `fit_ols`: their agreement
//! is a cross-check, exercised heavily in the tests.
//!
//! A fitted coefficient vector answers "what best predicts the response
//! from these columns", nothing more; whether it also estimates a causal
//! effect depends on how the data arose (see the simulation module, which
//! constructs cases where the two diverge).

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, sum_squares, PivotedQr};

const ORACLE_MAX_ROWS: usize = 10_000;
const ORACLE_MAX_COLS: usize = 50;

#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub response_name: String,
    pub regressor_names: Vec<String>,
    pub beta: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub rank: usize,
    pub condition_estimate: f64,
}

impl RegressionFit {
    /// Intercept of the equivalent uncentered model, recovered from the
    /// means the dataset recorded at centering time.
    pub fn implied_intercept(&self, data: &Dataset) -> Result<f64> {
        let mut intercept = data.mean_of(&self.response_name)?;
        for (name, beta) in self.regressor_names.iter().zip(&self.beta) {
            intercept -= beta * data.mean_of(name)?;
        }
        Ok(intercept)
    }
}

/// Resolved view of one regression problem: response and regressor
/// columns checked for existence, uniqueness, centering, and variance.
pub(crate) struct Design<'a> {
    pub y: &'a [f64],
    pub x: Vec<&'a [f64]>,
    pub names: Vec<String>,
}

pub(crate) fn resolve_design<'a, S: AsRef<str>>(
    data: &'a Dataset,
    response: &str,
    regressors: &[S],
) -> Result<Design<'a>> {
    if regressors.is_empty() {
        return Err(Error::NoRegressors);
    }
    let names: Vec<String> = regressors.iter().map(|s| s.as_ref().to_string()).collect();
    if let Some(r) = names.iter().find(|n| n.as_str() == response) {
        return Err(Error::ResponseIsRegressor(r.clone()));
    }
    for i in 1..names.len() {
        if names[..i].contains(&names[i]) {
            return Err(Error::DuplicateRegressor(names[i].clone()));
        }
    }
    if !data.is_centered() {
        return Err(Error::NotCentered);
    }
    let y = data.column(response)?;
    let x: Vec<&[f64]> = names
        .iter()
        .map(|n| data.column(n))
        .collect::<Result<_>>()?;
    let n = data.n_rows();
    if n <= x.len() {
        return Err(Error::TooFewRows {
            rows: n,
            regressors: x.len(),
        });
    }
    for (name, col) in names.iter().zip(&x) {
        if sum_squares(col) == 0.0 {
            return Err(Error::DegenerateColumn(name.clone()));
        }
    }
    if sum_squares(y) == 0.0 {
        return Err(Error::DegenerateResponse(response.to_string()));
    }
    Ok(Design { y, x, names })
}

/// Least-squares fit of `response` on `regressors` over centered data.
pub fn fit_ols<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    regressors: &[S],
) -> Result<RegressionFit> {
    let design = resolve_design(data, response, regressors)?;
    let qr = PivotedQr::factor(&design.x);
    let diag = qr.diagnostics();
    if diag.rank < design.x.len() {
        let column = diag
            .deficient_column
            .map(|j| design.names[j].clone())
            .unwrap_or_default();
        return Err(Error::RankDeficient {
            column,
            condition: diag.condition_estimate,
        });
    }
    let beta = qr.solve(design.y);

    let n = design.y.len();
    let mut fitted = vec![0.0; n];
    for (b, col) in beta.iter().zip(&design.x) {
        for (f, v) in fitted.iter_mut().zip(*col) {
            *f += b * v;
        }
    }
    let residuals: Vec<f64> = design.y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let tss = sum_squares(design.y);
    let rss = sum_squares(&residuals);
    let r_squared = (1.0 - rss / tss).clamp(0.0, 1.0);

    Ok(RegressionFit {
        response_name: response.to_string(),
        regressor_names: design.names,
        beta,
        fitted,
        residuals,
        r_squared,
        rank: diag.rank,
        condition_estimate: diag.condition_estimate,
    })
}

/// Coefficients from the explicit normal equations (X'X)b = X'Y.
/// Test oracle only; restricted to small problems.
pub fn normal_equations_oracle<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    regressors: &[S],
) -> Result<Vec<f64>> {
    let design = resolve_design(data, response, regressors)?;
    let n = data.n_rows();
    let k = design.x.len();
    if n > ORACLE_MAX_ROWS || k > ORACLE_MAX_COLS {
        return Err(Error::OracleSizeExceeded {
            rows: n,
            cols: k,
            max_rows: ORACLE_MAX_ROWS,
            max_cols: ORACLE_MAX_COLS,
        });
    }
    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    #[allow(clippy::needless_range_loop)]
    for i in 0..k {
        for j in 0..=i {
            let v = dot(design.x[i], design.x[j]);
            xtx[i][j] = v;
            xtx[j][i] = v;
        }
        xty[i] = dot(design.x[i], design.y);
    }
    crate::linalg::solve_gaussian(xtx, xty)
}

/// 1 - RSS/TSS for a fit, recomputed against the supplied response.
pub fn r_squared_of(fit: &RegressionFit, y: &[f64]) -> Result<f64> {
    let tss = sum_squares(y);
    if tss == 0.0 {
        return Err(Error::DegenerateResponse(fit.response_name.clone()));
    }
    let rss = sum_squares(&fit.residuals);
    Ok((1.0 - rss / tss).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn centered(names: Vec<&str>, cols: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(names, cols).unwrap().center().unwrap()
    }

    #[test]
    fn exact_line_through_origin() {
        let d = centered(
            vec!["y", "x"],
            vec![vec![-2.0, 0.0, 2.0], vec![-1.0, 0.0, 1.0]],
        );
        let fit = fit_ols(&d, "y", &["x"]).unwrap();
        assert_relative_eq!(fit.beta[0], 2.0, max_relative = 1e-14);
        assert_relative_eq!(fit.r_squared, 1.0, max_relative = 1e-14);
        assert_eq!(fit.rank, 1);
    }

    #[test]
    fn orthogonal_regressors_give_simple_betas() {
        // Columns chosen zero-mean and mutually orthogonal.
        let x1 = vec![1.0, -1.0, 1.0, -1.0];
        let x2 = vec![1.0, 1.0, -1.0, -1.0];
        let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let d = centered(
            vec!["y", "x1", "x2"],
            vec![y.clone(), x1.clone(), x2.clone()],
        );
        let multi = fit_ols(&d, "y", &["x1", "x2"]).unwrap();
        let simple1 = fit_ols(&d, "y", &["x1"]).unwrap();
        let simple2 = fit_ols(&d, "y", &["x2"]).unwrap();
        assert_relative_eq!(multi.beta[0], simple1.beta[0], max_relative = 1e-12);
        assert_relative_eq!(multi.beta[1], simple2.beta[0], max_relative = 1e-12);
    }

    #[test]
    fn oracle_matches_fit_on_small_design() {
        let d = centered(
            vec!["y", "a", "b", "c"],
            vec![
                vec![3.1, -2.0, 0.4, 1.7, -0.9, 2.2, -4.5, 0.0],
                vec![1.0, -1.0, 2.0, 0.5, -0.25, 1.5, -2.0, 0.0],
                vec![0.3, 2.1, -1.1, 0.8, 0.0, -0.7, 1.9, -3.3],
                vec![-1.0, 0.5, 0.5, -2.0, 1.0, 0.0, 2.5, -1.5],
            ],
        );
        let fit = fit_ols(&d, "y", &["a", "b", "c"]).unwrap();
        let oracle = normal_equations_oracle(&d, "y", &["a", "b", "c"]).unwrap();
        for (f, o) in fit.beta.iter().zip(&oracle) {
            assert_relative_eq!(f, o, max_relative = 1e-10);
        }
    }

    #[test]
    fn residuals_orthogonal_to_regressors() {
        let d = centered(
            vec!["y", "a", "b"],
            vec![
                vec![1.0, 4.0, -2.0, 0.5, 3.0],
                vec![0.2, 1.2, -0.7, 2.0, -1.0],
                vec![1.0, -1.0, 0.0, 0.5, 2.5],
            ],
        );
        let fit = fit_ols(&d, "y", &["a", "b"]).unwrap();
        for name in ["a", "b"] {
            let col = d.column(name).unwrap();
            let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(dot(&fit.residuals, col).abs() <= 1e-8 * 5.0 * scale);
        }
        for ((f, r), y) in fit
            .fitted
            .iter()
            .zip(&fit.residuals)
            .zip(d.column("y").unwrap())
        {
            assert_relative_eq!(f + r, y, max_relative = 1e-12);
        }
    }

    #[test]
    fn r_squared_equals_squared_correlation_single_regressor() {
        let d = centered(
            vec!["y", "x"],
            vec![vec![-2.0, 1.0, 1.0], vec![-1.0, 0.0, 1.0]],
        );
        let fit = fit_ols(&d, "y", &["x"]).unwrap();
        let y = d.column("y").unwrap();
        let x = d.column("x").unwrap();
        let corr = dot(x, y) / (sum_squares(x).sqrt() * sum_squares(y).sqrt());
        assert_relative_eq!(fit.r_squared, corr * corr, max_relative = 1e-12);
        assert_relative_eq!(
            r_squared_of(&fit, y).unwrap(),
            fit.r_squared,
            max_relative = 1e-14
        );
        // y = [-2, 1, 1] centered on x = [-1, 0, 1]: corr^2 = 0.75.
        assert_relative_eq!(fit.r_squared, 0.75, max_relative = 1e-12);
    }

    #[test]
    fn implied_intercept_recovers_uncentered_line() {
        // y = 3 + 2 x fitted after centering: intercept comes back from means.
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 + 2.0 * v).collect();
        let d = Dataset::new(vec!["y", "x"], vec![y, x])
            .unwrap()
            .center()
            .unwrap();
        let fit = fit_ols(&d, "y", &["x"]).unwrap();
        assert_relative_eq!(fit.beta[0], 2.0, max_relative = 1e-12);
        assert_relative_eq!(
            fit.implied_intercept(&d).unwrap(),
            3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_rank_deficient_design() {
        let a = vec![1.0, -1.0, 2.0, -2.0];
        let b: Vec<f64> = a.iter().map(|v| -3.0 * v).collect();
        let d = centered(vec!["y", "a", "b"], vec![vec![1.0, 2.0, 3.0, 4.0], a, b]);
        let err = fit_ols(&d, "y", &["a", "b"]).unwrap_err();
        match err {
            Error::RankDeficient { column, condition } => {
                assert!(column == "a" || column == "b");
                assert!(condition > 1e10);
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        let d = centered(
            vec!["y", "x"],
            vec![vec![1.0, 2.0, 4.0], vec![0.0, 1.0, 5.0]],
        );
        assert!(matches!(
            fit_ols(&d, "y", &Vec::<String>::new()),
            Err(Error::NoRegressors)
        ));
        assert!(matches!(
            fit_ols(&d, "y", &["x", "y"]),
            Err(Error::ResponseIsRegressor(_))
        ));
        assert!(matches!(
            fit_ols(&d, "y", &["x", "x"]),
            Err(Error::DuplicateRegressor(_))
        ));
        assert!(matches!(
            fit_ols(&d, "y", &["z"]),
            Err(Error::UnknownColumn(_))
        ));

        let raw = Dataset::new(vec!["y", "x"], vec![vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            fit_ols(&raw, "y", &["x"]),
            Err(Error::NotCentered)
        ));

        let tiny = centered(
            vec!["y", "a", "b"],
            vec![vec![1.0, 2.0], vec![0.0, 1.0], vec![3.0, 1.0]],
        );
        assert!(matches!(
            fit_ols(&tiny, "y", &["a", "b"]),
            Err(Error::TooFewRows {
                rows: 2,
                regressors: 2
            })
        ));

        let flat = centered(
            vec!["y", "x"],
            vec![vec![1.0, 2.0, 4.0], vec![7.0, 7.0, 7.0]],
        );
        assert!(matches!(
            fit_ols(&flat, "y", &["x"]),
            Err(Error::DegenerateColumn(name)) if name == "x"
        ));

        let flat_y = centered(
            vec!["y", "x"],
            vec![vec![7.0, 7.0, 7.0], vec![1.0, 2.0, 4.0]],
        );
        assert!(matches!(
            fit_ols(&flat_y, "y", &["x"]),
            Err(Error::DegenerateResponse(name)) if name == "y"
        ));
    }

    #[test]
    fn oracle_enforces_size_limit() {
        let n = ORACLE_MAX_ROWS + 1;
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let d = centered(vec!["y", "x"], vec![y, x]);
        assert!(matches!(
            normal_equations_oracle(&d, "y", &["x"]),
            Err(Error::OracleSizeExceeded { .. })
        ));
    }

    #[test]
    fn zero_beta_gives_zero_r_squared() {
        let d = centered(
            vec!["y", "x"],
            vec![vec![1.0, -1.0, 2.0, -2.0], vec![1.0, 1.0, -1.0, -1.0]],
        );
        let mut fit = fit_ols(&d, "y", &["x"]).unwrap();
        fit.beta = vec![0.0];
        fit.residuals = d.column("y").unwrap().to_vec();
        assert_relative_eq!(r_squared_of(&fit, d.column("y").unwrap()).unwrap(), 0.0);
    }
}
