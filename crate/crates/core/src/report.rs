//! CSV ingestion, report assembly, and rendering.
//!
//! Reports carry full-precision numbers in JSON (shortest round-trip
//! float formatting, so identical inputs give byte-identical output) and
//! 6-significant-digit numbers in tables. Every narrative sentence
//! embeds the values it talks about.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::ols::fit_ols;
use crate::partial::{decompose, PartialDecomposition};
use crate::pearson::{
    amplification_and_variance, check_delta_identity, AmplificationReport, DeltaIdentityReport,
    PearsonScenario,
};
use crate::relative_gap;
use crate::synth::{bias_report, generate, BiasReport, SimulationSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub fn validate_tolerance(tolerance: f64) -> Result<f64> {
    if tolerance.is_finite() && tolerance > 0.0 {
        Ok(tolerance)
    } else {
        Err(Error::InvalidTolerance(format!("{tolerance}")))
    }
}

// ---------------------------------------------------------------- CSV I/O

/// Read a UTF-8, header-first, all-numeric CSV into an uncentered dataset.
pub fn ingest_csv(path: &Path) -> Result<Dataset> {
    let shown = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(&shown, e))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(&shown, e))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() {
        return Err(Error::CsvFile {
            path: shown,
            message: "no header row".into(),
        });
    }
    for (j, h) in headers.iter().enumerate() {
        if h.is_empty() {
            return Err(Error::CsvFormat {
                path: shown,
                line: 1,
                column: format!("#{}", j + 1),
                message: "empty header name".into(),
            });
        }
        if headers[..j].contains(h) {
            return Err(Error::CsvFormat {
                path: shown,
                line: 1,
                column: h.clone(),
                message: "duplicate header".into(),
            });
        }
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // the header row is line 1
        let record = record.map_err(|e| csv_error(&shown, e))?;
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::CsvFormat {
                path: shown.clone(),
                line,
                column: headers[j].clone(),
                message: format!("cannot parse {field:?} as a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::CsvFormat {
                    path: shown.clone(),
                    line,
                    column: headers[j].clone(),
                    message: format!("non-finite value {field:?}"),
                });
            }
            columns[j].push(value);
        }
    }
    if columns[0].len() < 2 {
        return Err(Error::CsvFile {
            path: shown,
            message: format!("need at least 2 data rows, found {}", columns[0].len()),
        });
    }
    Dataset::new(headers, columns)
}

/// Write a dataset in the same format `ingest_csv` accepts. Values use
/// shortest round-trip formatting, so a read-back reproduces them exactly.
pub fn write_csv(path: &Path, data: &Dataset) -> Result<()> {
    let shown = path.display().to_string();
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(&shown, e))?;
    writer
        .write_record(data.names())
        .map_err(|e| csv_error(&shown, e))?;
    let mut row = Vec::with_capacity(data.n_cols());
    for i in 0..data.n_rows() {
        row.clear();
        for j in 0..data.n_cols() {
            row.push(format!("{}", data.column_at(j)[i]));
        }
        writer
            .write_record(&row)
            .map_err(|e| csv_error(&shown, e))?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_error(path: &str, e: csv::Error) -> Error {
    let position = e.position().map(|p| p.line());
    let message = match e.into_kind() {
        csv::ErrorKind::Io(io) => io.to_string(),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        other => format!("{other:?}"),
    };
    Error::CsvFile {
        path: path.to_string(),
        message: match position {
            Some(line) => format!("line {line}: {message}"),
            None => message,
        },
    }
}

// ------------------------------------------------------------ formatting

use crate::format_significant;

fn sig6(value: f64) -> String {
    format_significant(value, 6)
}

fn join_names(names: &[String]) -> String {
    names.join(", ")
}

// ----------------------------------------------------------- fit report

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub response: String,
    pub regressors: Vec<String>,
    pub n: usize,
    pub k: usize,
    pub beta: Vec<f64>,
    pub implied_intercept: f64,
    pub response_mean: f64,
    pub r_squared: f64,
    pub rank: usize,
    pub condition_estimate: f64,
    pub narrative: Vec<String>,
}

pub fn build_fit_report<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    regressors: &[S],
) -> Result<FitReport> {
    let fit = fit_ols(data, response, regressors)?;
    let implied_intercept = fit.implied_intercept(data)?;
    let response_mean = data.mean_of(response)?;
    let n = data.n_rows();
    let k = fit.beta.len();
    let beta_list = fit
        .regressor_names
        .iter()
        .zip(&fit.beta)
        .map(|(name, b)| format!("{name} = {}", sig6(*b)))
        .collect::<Vec<_>>()
        .join(", ");
    let narrative = vec![
        format!(
            "Fit of {response} on {k} regressor(s) over {n} rows: R^2 = {}, \
             condition estimate {}.",
            sig6(fit.r_squared),
            sig6(fit.condition_estimate)
        ),
        format!("Centered-model coefficients: {beta_list}."),
        format!(
            "Columns were centered before fitting; the implied intercept {} \
             is recovered from the stored means (response mean {}).",
            sig6(implied_intercept),
            sig6(response_mean)
        ),
    ];
    Ok(FitReport {
        response: fit.response_name.clone(),
        regressors: fit.regressor_names.clone(),
        n,
        k,
        beta: fit.beta.clone(),
        implied_intercept,
        response_mean,
        r_squared: fit.r_squared,
        rank: fit.rank,
        condition_estimate: fit.condition_estimate,
        narrative,
    })
}

pub fn render_fit_table(report: &FitReport) -> String {
    let mut out = String::new();
    out.push_str("fit summary\n");
    out.push_str(&format!("response: {}\n", report.response));
    out.push_str(&format!(
        "rows: {}    regressors: {}    rank: {}\n",
        report.n, report.k, report.rank
    ));
    out.push_str(&format!(
        "r_squared: {}    condition_estimate: {}\n",
        sig6(report.r_squared),
        sig6(report.condition_estimate)
    ));
    out.push_str(&format!(
        "response_mean: {}    implied_intercept: {}\n\n",
        sig6(report.response_mean),
        sig6(report.implied_intercept)
    ));
    let rows: Vec<[String; 2]> = report
        .regressors
        .iter()
        .zip(&report.beta)
        .map(|(name, b)| [name.clone(), sig6(*b)])
        .collect();
    out.push_str(&render_columns(&["regressor", "beta"], &rows));
    out.push_str("\nnotes:\n");
    for (i, line) in report.narrative.iter().enumerate() {
        out.push_str(&format!("  {}. {line}\n", i + 1));
    }
    out
}

// -------------------------------------------------------- ledger report

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub n: usize,
    pub k: usize,
    pub r_squared: f64,
    pub rank: usize,
    pub condition_estimate: f64,
    pub response_mean: f64,
    pub implied_intercept: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub tolerance: f64,
    /// Largest relative gap between the raw-response route and the
    /// multivariate coefficient, across regressors.
    pub max_gap_v1: f64,
    /// Same for the residualized-response route.
    pub max_gap_v2: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerRow {
    #[serde(flatten)]
    pub decomposition: PartialDecomposition,
    /// Mean of the raw focus column, recorded at centering time.
    pub focus_mean: f64,
}

/// The per-regressor interpretation ledger for one multivariate fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerReport {
    pub response: String,
    pub fit_summary: FitSummary,
    pub equivalence: EquivalenceSummary,
    pub rows: Vec<LedgerRow>,
    pub narrative: Vec<String>,
}

pub fn build_ledger<S: AsRef<str>>(
    data: &Dataset,
    response: &str,
    regressors: &[S],
    tolerance: f64,
) -> Result<LedgerReport> {
    let tolerance = validate_tolerance(tolerance)?;
    let fit = fit_ols(data, response, regressors)?;
    let records = decompose(data, response, regressors)?;

    let mut max_gap_v1 = 0.0f64;
    let mut max_gap_v2 = 0.0f64;
    for rec in &records {
        max_gap_v1 = max_gap_v1.max(relative_gap(rec.beta_prt_v1, rec.beta_multivariate));
        max_gap_v2 = max_gap_v2.max(relative_gap(rec.beta_prt_v2, rec.beta_multivariate));
    }
    let holds = max_gap_v1 <= tolerance && max_gap_v2 <= tolerance;

    let fit_summary = FitSummary {
        n: data.n_rows(),
        k: fit.beta.len(),
        r_squared: fit.r_squared,
        rank: fit.rank,
        condition_estimate: fit.condition_estimate,
        response_mean: data.mean_of(response)?,
        implied_intercept: fit.implied_intercept(data)?,
    };

    let mut narrative = vec![
        format!(
            "Fit of {response} on {} regressor(s) over {} rows: R^2 = {}, \
             condition estimate {}.",
            fit_summary.k,
            fit_summary.n,
            sig6(fit_summary.r_squared),
            sig6(fit_summary.condition_estimate)
        ),
        if holds {
            format!(
                "Each multivariate coefficient was recomputed as a univariate \
                 slope on the corresponding residualized regressor; the routes \
                 agree within tolerance {}: largest relative gap {} with the \
                 raw response and {} with the residualized response.",
                sig6(tolerance),
                sig6(max_gap_v1),
                sig6(max_gap_v2)
            )
        } else {
            format!(
                "WARNING: coefficient routes disagree beyond tolerance {}: \
                 largest relative gap {} with the raw response and {} with the \
                 residualized response.",
                sig6(tolerance),
                sig6(max_gap_v1),
                sig6(max_gap_v2)
            )
        },
    ];

    for rec in &records {
        if rec.controls.is_empty() {
            narrative.push(format!(
                "{}: no controls to allow for; the multivariate and simple \
                 slopes coincide at {}, and partial R^2 = semi-partial R^2 = \
                 R^2 = {}.",
                rec.focus,
                sig6(rec.beta_multivariate),
                sig6(rec.partial_r2)
            ));
        } else {
            let controls = join_names(&rec.controls);
            narrative.push(format!(
                "{}: the coefficient {} applies to the adjusted column \
                 ({} with {} allowed for, i.e. their least-squares \
                 contribution removed), not to the raw values; the slope of \
                 {response} on that adjusted column alone is {}, and {} after \
                 also adjusting {response}.",
                rec.focus,
                sig6(rec.beta_multivariate),
                rec.focus,
                controls,
                sig6(rec.beta_prt_v1),
                sig6(rec.beta_prt_v2)
            ));
            narrative.push(format!(
                "{}: the reading '{} kept constant' is shorthand for that \
                 residualization; with a different control set the \
                 coefficient would in general differ from {}. Semi-partial \
                 R^2 {} (gain in R^2 from adding {}), partial R^2 {} (share \
                 of the response variance the controls leave unexplained), \
                 partial correlation {}.",
                rec.focus,
                controls,
                sig6(rec.beta_multivariate),
                sig6(rec.semi_partial_r2),
                rec.focus,
                sig6(rec.partial_r2),
                sig6(rec.partial_correlation)
            ));
        }
    }

    let rows = records
        .into_iter()
        .map(|decomposition| {
            Ok(LedgerRow {
                focus_mean: data.mean_of(&decomposition.focus)?,
                decomposition,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LedgerReport {
        response: response.to_string(),
        fit_summary,
        equivalence: EquivalenceSummary {
            tolerance,
            max_gap_v1,
            max_gap_v2,
            holds,
        },
        rows,
        narrative,
    })
}

pub fn render_ledger_table(report: &LedgerReport) -> String {
    let s = &report.fit_summary;
    let e = &report.equivalence;
    let mut out = String::new();
    out.push_str("decomposition ledger\n");
    out.push_str(&format!("response: {}\n", report.response));
    out.push_str(&format!(
        "rows: {}    regressors: {}    rank: {}\n",
        s.n, s.k, s.rank
    ));
    out.push_str(&format!(
        "r_squared: {}    condition_estimate: {}\n",
        sig6(s.r_squared),
        sig6(s.condition_estimate)
    ));
    out.push_str(&format!(
        "response_mean: {}    implied_intercept: {}\n",
        sig6(s.response_mean),
        sig6(s.implied_intercept)
    ));
    out.push_str(&format!(
        "equivalence: {}    tolerance: {}    max_gap_v1: {}    max_gap_v2: {}\n\n",
        if e.holds { "holds" } else { "FAILS" },
        sig6(e.tolerance),
        sig6(e.max_gap_v1),
        sig6(e.max_gap_v2)
    ));

    let rows: Vec<[String; 8]> = report
        .rows
        .iter()
        .map(|row| {
            let d = &row.decomposition;
            [
                d.focus.clone(),
                sig6(d.beta_multivariate),
                sig6(d.beta_prt_v1),
                sig6(d.beta_prt_v2),
                sig6(d.semi_partial_r2),
                sig6(d.partial_r2),
                sig6(d.partial_correlation),
                sig6(row.focus_mean),
            ]
        })
        .collect();
    out.push_str(&render_columns(
        &[
            "focus",
            "beta",
            "beta_v1",
            "beta_v2",
            "semi_r2",
            "partial_r2",
            "partial_corr",
            "mean",
        ],
        &rows,
    ));
    out.push_str("\nnotes:\n");
    for (i, line) in report.narrative.iter().enumerate() {
        out.push_str(&format!("  {}. {line}\n", i + 1));
    }
    out
}

// ------------------------------------------------------- two-regressor demo

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PearsonDemoReport {
    pub scenario: PearsonScenario,
    pub multivariate_beta1: f64,
    pub multivariate_beta2: f64,
    pub sample_n: usize,
    pub sample_seed: u64,
    pub fitted_beta1: f64,
    pub fitted_beta2: f64,
    /// Largest relative gap between the closed forms and the fit on the
    /// exact-moment sample.
    pub max_closed_form_gap: f64,
    pub closed_forms_match: bool,
    pub tolerance: f64,
    /// Present only for the beta_y_x2 = 0 scenario.
    pub amplification: Option<AmplificationReport>,
    /// Present only for the beta_y_x2 = 0 scenario.
    pub delta_identity: Option<DeltaIdentityReport>,
    pub narrative: Vec<String>,
}

pub fn build_pearson_demo(
    scenario: &PearsonScenario,
    n: usize,
    seed: u64,
    tolerance: f64,
) -> Result<PearsonDemoReport> {
    let tolerance = validate_tolerance(tolerance)?;
    let b1 = scenario.multivariate_beta1();
    let b2 = scenario.multivariate_beta2();

    let data = scenario.exact_sample(n, seed)?;
    let fit = fit_ols(&data, "y", &["x1", "x2"])?;
    let max_closed_form_gap = relative_gap(fit.beta[0], b1).max(relative_gap(fit.beta[1], b2));
    let closed_forms_match = max_closed_form_gap <= tolerance;

    let attenuation = scenario.beta_y_x2 == 0.0;
    let amplification = if attenuation {
        Some(amplification_and_variance(scenario)?)
    } else {
        None
    };
    let delta_identity = if attenuation {
        Some(check_delta_identity(scenario, &data, tolerance.max(1e-10))?)
    } else {
        None
    };

    let mut narrative = vec![format!(
        "Simple slopes: y on x1 = {}, y on x2 = {}, x2 on x1 = {}, \
         x1 on x2 = {}; squared regressor correlation rho^2 = {}.",
        sig6(scenario.beta_y_x1),
        sig6(scenario.beta_y_x2),
        sig6(scenario.beta_x2_x1),
        sig6(scenario.beta_x1_x2),
        sig6(scenario.rho_sq)
    )];
    if scenario.rho_sq == 0.0 {
        narrative.push(format!(
            "rho^2 = 0: the regressors are uncorrelated, so the multivariate \
             slopes reduce to the simple slopes unchanged: beta1 = {}, \
             beta2 = {}.",
            sig6(b1),
            sig6(b2)
        ));
    } else {
        narrative.push(format!(
            "Correlated regressors: the closed forms give beta1 = {} and \
             beta2 = {}, each mixing both simple slopes through the shared \
             factor 1/(1 - rho^2) = {}.",
            sig6(b1),
            sig6(b2),
            sig6(1.0 / (1.0 - scenario.rho_sq))
        ));
    }
    narrative.push(format!(
        "Cross-check on an exact-moment sample (n = {n}, seed = {seed}): \
         fitted slopes ({}, {}), largest relative gap to the closed forms \
         {} (tolerance {}).",
        sig6(fit.beta[0]),
        sig6(fit.beta[1]),
        sig6(max_closed_form_gap),
        sig6(tolerance)
    ));
    if let Some(a) = &amplification {
        narrative.push(format!(
            "y has no marginal relationship with x2 (simple slope 0), yet \
             the two-regressor fit assigns x2 the coefficient {} and \
             amplifies the x1 coefficient from {} to {} (factor {}).",
            sig6(b2),
            sig6(a.beta_simple),
            sig6(a.beta_amplified),
            sig6(a.amplification_factor)
        ));
        narrative.push(format!(
            "The fitted-value variance grows by the same factor: {} vs {} \
             (ratio {}), while the covariance of y with the adjusted x1 \
             stays at {} (raw: {}).",
            sig6(a.variance_delta_fit),
            sig6(a.variance_simple_fit),
            sig6(a.variance_ratio),
            sig6(a.cov_y_delta),
            sig6(a.cov_y_x1)
        ));
    }
    if let Some(d) = &delta_identity {
        narrative.push(format!(
            "The two-coefficient fitted surface collapses to beta1 * (x1 - \
             {} * x2): largest pointwise relative gap {}.",
            sig6(d.beta_x1_x2_sample),
            sig6(d.max_pointwise_gap)
        ));
    }

    Ok(PearsonDemoReport {
        scenario: *scenario,
        multivariate_beta1: b1,
        multivariate_beta2: b2,
        sample_n: n,
        sample_seed: seed,
        fitted_beta1: fit.beta[0],
        fitted_beta2: fit.beta[1],
        max_closed_form_gap,
        closed_forms_match,
        tolerance,
        amplification,
        delta_identity,
        narrative,
    })
}

pub fn render_pearson_table(report: &PearsonDemoReport) -> String {
    let s = &report.scenario;
    let mut out = String::new();
    out.push_str("two-regressor closed forms\n");
    out.push_str(&format!(
        "beta_y_x1: {}    beta_y_x2: {}\n",
        sig6(s.beta_y_x1),
        sig6(s.beta_y_x2)
    ));
    out.push_str(&format!(
        "beta_x2_x1: {}    beta_x1_x2: {}    rho_sq: {}\n\n",
        sig6(s.beta_x2_x1),
        sig6(s.beta_x1_x2),
        sig6(s.rho_sq)
    ));
    let rows = vec![
        [
            "x1".to_string(),
            sig6(report.multivariate_beta1),
            sig6(report.fitted_beta1),
        ],
        [
            "x2".to_string(),
            sig6(report.multivariate_beta2),
            sig6(report.fitted_beta2),
        ],
    ];
    out.push_str(&render_columns(
        &["regressor", "closed_form", "fitted"],
        &rows,
    ));
    out.push_str(&format!(
        "\nclosed_forms_match: {}    max_gap: {}    tolerance: {}\n",
        report.closed_forms_match,
        sig6(report.max_closed_form_gap),
        sig6(report.tolerance)
    ));
    if let Some(a) = &report.amplification {
        out.push_str(&format!(
            "amplification: {} -> {} (factor {})    variance_ratio: {}\n",
            sig6(a.beta_simple),
            sig6(a.beta_amplified),
            sig6(a.amplification_factor),
            sig6(a.variance_ratio)
        ));
    }
    if let Some(d) = &report.delta_identity {
        out.push_str(&format!(
            "delta_identity: {}    max_pointwise_gap: {}    construction_ok: {}\n",
            if d.identity_holds { "holds" } else { "FAILS" },
            sig6(d.max_pointwise_gap),
            d.construction_ok
        ));
    }
    out.push_str("\nnotes:\n");
    for (i, line) in report.narrative.iter().enumerate() {
        out.push_str(&format!("  {}. {line}\n", i + 1));
    }
    out
}

// ---------------------------------------------------------- simulation

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateReport {
    pub spec: SimulationSpec,
    /// CSV path the sample was written to, when requested.
    pub output_csv: Option<String>,
    pub bias: BiasReport,
    pub narrative: Vec<String>,
}

pub fn build_simulate_report(
    spec: &SimulationSpec,
    output_csv: Option<&Path>,
) -> Result<SimulateReport> {
    let (data, _truth) = generate(spec)?;
    if let Some(path) = output_csv {
        write_csv(path, &data)?;
    }
    let names = spec.column_names();
    let regressors: Vec<&str> = names.iter().skip(1).map(|s| s.as_str()).collect();
    let fit = fit_ols(&data, "y", &regressors)?;
    let bias = bias_report(spec, &fit)?;

    let gamma_list = bias
        .gamma_hat
        .iter()
        .zip(&bias.gamma_population)
        .enumerate()
        .map(|(j, (hat, pop))| format!("x{} = {} (target {})", j + 1, sig6(*hat), sig6(*pop)))
        .collect::<Vec<_>>()
        .join(", ");
    let narrative = vec![
        format!(
            "Generated {} rows with {} regressor(s) from seed {}; fitted \
             slopes {gamma_list}.",
            spec.n, spec.k, spec.seed
        ),
        bias.note.clone(),
    ];
    Ok(SimulateReport {
        spec: spec.clone(),
        output_csv: output_csv.map(|p| p.display().to_string()),
        bias,
        narrative,
    })
}

pub fn render_simulate_table(report: &SimulateReport) -> String {
    let b = &report.bias;
    let mut out = String::new();
    out.push_str("simulation bias report\n");
    out.push_str(&format!(
        "rows: {}    regressors: {}    seed: {}    exogenous: {}\n",
        b.n, b.k, report.spec.seed, b.exogenous
    ));
    if let Some(path) = &report.output_csv {
        out.push_str(&format!("sample written to: {path}\n"));
    }
    out.push('\n');
    let rows: Vec<[String; 5]> = (0..b.k)
        .map(|j| {
            [
                format!("x{}", j + 1),
                sig6(b.beta_structural[j]),
                sig6(b.analytic_bias[j]),
                sig6(b.gamma_population[j]),
                sig6(b.gamma_hat[j]),
            ]
        })
        .collect();
    out.push_str(&render_columns(
        &["regressor", "beta", "bias", "gamma", "fitted"],
        &rows,
    ));
    out.push_str(&format!(
        "\nmax_relative_gap: {}    r_squared: {}\n",
        sig6(b.max_gap),
        sig6(b.r_squared)
    ));
    out.push_str("\nnotes:\n");
    for (i, line) in report.narrative.iter().enumerate() {
        out.push_str(&format!("  {}. {line}\n", i + 1));
    }
    out
}

// -------------------------------------------------------------- tables

/// Left-aligned fixed-width columns, two spaces between, no trailing
/// spaces: spacing depends only on cell contents.
fn render_columns<const W: usize>(headers: &[&str; W], rows: &[[String; W]]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[&str]| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < cells.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_row(&headers.map(|h| h));
    for row in rows {
        let cells: Vec<&str> = row.iter().map(|c| c.as_str()).collect();
        push_row(&cells);
    }
    out
}
