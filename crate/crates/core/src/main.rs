//! Command-line driver.
//!
//! Exit codes: 0 success, 2 input validation failure, 3 numerical
//! degeneracy, 64 usage error (bad flags). Reports go to stdout, errors
//! to stderr.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use partialreg::error::{Error, Result};
use partialreg::report::{
    build_fit_report, build_ledger, build_pearson_demo, build_simulate_report, ingest_csv,
    render_fit_table, render_ledger_table, render_pearson_table, render_simulate_table,
    validate_tolerance, DEFAULT_TOLERANCE,
};
use partialreg::{PearsonScenario, SimulationSpec};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const TOLERANCE_ENV: &str = "PARTIALREG_TOLERANCE";

#[derive(Parser)]
#[command(
    name = "partialreg",
    version,
    about = "Linear regression with per-coefficient residualization ledgers",
    long_about = "Centered least-squares fitting in which every multivariate \
                  coefficient is re-derived as a univariate slope on a \
                  residualized regressor, plus two-regressor closed forms and \
                  a seeded simulator that separates best-fit coefficients \
                  from structural ones."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Relative tolerance for equivalence checks
    /// (default: PARTIALREG_TOLERANCE or 1e-8)
    #[arg(long, global = true, allow_negative_numbers = true)]
    tolerance: Option<f64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a centered least-squares regression and summarize it
    Fit {
        /// Input CSV file (headers in the first row, numeric cells)
        #[arg(long)]
        input: PathBuf,
        /// Response column name
        #[arg(long)]
        response: String,
        /// Comma-separated regressor column names
        #[arg(long, value_delimiter = ',', required = true)]
        regressors: Vec<String>,
    },
    /// Per-regressor ledger: each coefficient recomputed on its residualized column
    Decompose {
        /// Input CSV file (headers in the first row, numeric cells)
        #[arg(long)]
        input: PathBuf,
        /// Response column name
        #[arg(long)]
        response: String,
        /// Comma-separated regressor column names
        #[arg(long, value_delimiter = ',', required = true)]
        regressors: Vec<String>,
    },
    /// Two-regressor closed forms from four simple slopes, cross-checked on an exact-moment sample
    PearsonDemo {
        /// Simple slope of y on x1
        #[arg(long, allow_negative_numbers = true)]
        beta_y_x1: f64,
        /// Simple slope of y on x2 (0 selects the attenuation scenario)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta_y_x2: f64,
        /// Simple slope of x2 on x1
        #[arg(long, allow_negative_numbers = true)]
        beta_x2_x1: f64,
        /// Simple slope of x1 on x2 (defaults to the value of --beta-x2-x1)
        #[arg(long, allow_negative_numbers = true)]
        beta_x1_x2: Option<f64>,
        /// Rows in the cross-check sample
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Seed for the cross-check sample
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a seeded Gaussian sample and report fitted vs structural coefficients
    Simulate {
        /// TOML spec file (keys: k, sigma_xx, beta, sigma_eps, sigma_x_eps, n, seed)
        #[arg(long)]
        spec: PathBuf,
        /// Override the seed in the spec file
        #[arg(long)]
        seed: Option<u64>,
        /// Write the generated sample to this CSV path
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; anything else is
            // a usage error.
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(64)
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_degeneracy() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64> {
    if let Some(t) = flag {
        return validate_tolerance(t);
    }
    if let Ok(raw) = std::env::var(TOLERANCE_ENV) {
        let parsed: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidTolerance(raw.clone()))?;
        return validate_tolerance(parsed);
    }
    Ok(DEFAULT_TOLERANCE)
}

fn emit<T: Serialize>(format: Format, report: &T, table: String) -> Result<()> {
    match format {
        Format::Json => {
            let json = serde_json::to_string_pretty(report)
                .map_err(|e| Error::InvalidSpec(format!("serialization failed: {e}")))?;
            println!("{json}");
        }
        Format::Table => print!("{table}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let tolerance = resolve_tolerance(cli.tolerance)?;
    match &cli.command {
        Command::Fit {
            input,
            response,
            regressors,
        } => {
            let data = ingest_csv(input)?.center()?;
            let report = build_fit_report(&data, response, regressors)?;
            emit(cli.format, &report, render_fit_table(&report))
        }
        Command::Decompose {
            input,
            response,
            regressors,
        } => {
            let data = ingest_csv(input)?.center()?;
            let report = build_ledger(&data, response, regressors, tolerance)?;
            emit(cli.format, &report, render_ledger_table(&report))
        }
        Command::PearsonDemo {
            beta_y_x1,
            beta_y_x2,
            beta_x2_x1,
            beta_x1_x2,
            n,
            seed,
        } => {
            let scenario = PearsonScenario::new(
                *beta_y_x1,
                *beta_y_x2,
                *beta_x2_x1,
                beta_x1_x2.unwrap_or(*beta_x2_x1),
            )?;
            let report = build_pearson_demo(&scenario, *n, *seed, tolerance)?;
            emit(cli.format, &report, render_pearson_table(&report))
        }
        Command::Simulate { spec, seed, output } => {
            let text = std::fs::read_to_string(spec)?;
            let mut spec = SimulationSpec::from_toml_str(&text)?;
            if let Some(seed) = seed {
                spec.seed = *seed;
            }
            let report = build_simulate_report(&spec, output.as_deref())?;
            emit(cli.format, &report, render_simulate_table(&report))
        }
    }
}
