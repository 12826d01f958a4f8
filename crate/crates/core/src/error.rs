//! Error type shared across the crate.
//!
//! Errors fall into two classes that the CLI maps onto distinct exit codes:
//! input validation (malformed files, unknown columns, inconsistent
//! requests) and numerical degeneracy (rank deficiency, zero variances,
//! non-positive-definite covariances).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // ---- validation ----
    #[error("dataset has no columns")]
    EmptyDataset,

    #[error("dataset has no rows")]
    NoRows,

    #[error("column \"{column}\" has {actual} rows, expected {expected}")]
    ColumnLengthMismatch {
        column: String,
        expected: usize,
        actual: usize,
    },

    #[error("duplicate column name \"{0}\"")]
    DuplicateColumn(String),

    #[error("column \"{column}\" contains a non-finite value at row {row}")]
    NonFinite { column: String, row: usize },

    #[error("unknown column \"{0}\"")]
    UnknownColumn(String),

    #[error("centering requires at least 2 rows, dataset has {0}")]
    TooFewRowsToCenter(usize),

    #[error("dataset must be centered before fitting")]
    NotCentered,

    #[error("response \"{0}\" is also listed as a regressor")]
    ResponseIsRegressor(String),

    #[error("regressor \"{0}\" is listed more than once")]
    DuplicateRegressor(String),

    #[error("target \"{0}\" is also listed as a control")]
    TargetInControls(String),

    #[error("at least one regressor is required")]
    NoRegressors,

    #[error("need more rows than regressors: {rows} rows for {regressors} regressors")]
    TooFewRows { rows: usize, regressors: usize },

    #[error(
        "oracle limited to n <= {max_rows} rows and k <= {max_cols} columns, got {rows}x{cols}"
    )]
    OracleSizeExceeded {
        rows: usize,
        cols: usize,
        max_rows: usize,
        max_cols: usize,
    },

    #[error("{path}: line {line}, column {column}: {message}")]
    CsvFormat {
        path: String,
        line: usize,
        column: String,
        message: String,
    },

    #[error("{path}: {message}")]
    CsvFile { path: String, message: String },

    #[error("simulation spec: {0}")]
    InvalidSpec(String),

    #[error("covariance matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("exact-moment sample needs n > {dimension}, got n = {n}")]
    SampleTooSmall { n: usize, dimension: usize },

    #[error("scenario requires beta_y_x2 = 0, got {0}")]
    ScenarioNotAttenuation(f64),

    #[error("inconsistent scenario: beta_x2_x1 = {beta_x2_x1} and beta_x1_x2 = {beta_x1_x2} must share a sign or both be zero")]
    ScenarioSignMismatch { beta_x2_x1: f64, beta_x1_x2: f64 },

    #[error("tolerance must be a finite positive number, got {0}")]
    InvalidTolerance(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    // ---- numerical degeneracy ----
    #[error("rank-deficient design: column \"{column}\" is linearly dependent on the others (condition estimate {condition:.3e})")]
    RankDeficient { column: String, condition: f64 },

    #[error("column \"{0}\" is constant after centering (zero variance)")]
    DegenerateColumn(String),

    #[error("response \"{0}\" has zero variance")]
    DegenerateResponse(String),

    #[error("residualized \"{0}\" has no variance left: focus is collinear with the controls")]
    CollinearFocus(String),

    #[error("controls explain all of \"{0}\": residual variance is zero")]
    ControlsExplainResponse(String),

    #[error("normal equations are singular")]
    SingularNormalEquations,

    #[error("covariance matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("regressor correlation rho^2 = {0} must be < 1")]
    DegenerateCorrelation(f64),
}

impl Error {
    /// True for errors caused by numerical degeneracy of otherwise
    /// well-formed input, as opposed to malformed input itself.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::DegenerateColumn(_)
                | Error::DegenerateResponse(_)
                | Error::CollinearFocus(_)
                | Error::ControlsExplainResponse(_)
                | Error::SingularNormalEquations
                | Error::NotPositiveDefinite { .. }
                | Error::DegenerateCorrelation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
