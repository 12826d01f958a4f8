pub mod dataset;
pub mod error;
mod linalg;
pub mod ols;
pub mod partial;
pub mod pearson;
pub mod report;
pub mod rng;
pub mod synth;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use ols::{fit_ols, normal_equations_oracle, r_squared_of, RegressionFit};
pub use partial::{
    decompose, partial_correlation, partial_r2, prt_v1, prt_v2, residualize, semi_partial_r2,
    PartialDecomposition,
};
pub use pearson::{
    amplification_and_variance, attenuation_scenario, check_delta_identity, AmplificationReport,
    DeltaIdentityReport, PearsonScenario,
};
pub use report::{
    build_fit_report, build_ledger, build_pearson_demo, build_simulate_report, ingest_csv,
    write_csv, FitReport, LedgerReport, PearsonDemoReport, SimulateReport,
};
pub use rng::NormalStream;
pub use synth::{
    bias_report, exact_moment_sample, generate, BiasReport, SimulationSpec, SimulationTruth,
};

/// Relative gap with a unit floor: |a - b| / max(1, |a|, |b|).
/// Behaves like a relative error for large magnitudes and an absolute
/// error near zero, so tolerances need no special-casing at 0.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0f64.max(a.abs()).max(b.abs())
}

/// Fixed-rule significant-digit formatting for tables and narratives:
/// plain decimal inside [1e-4, 10^sig), scientific outside, trailing
/// zeros trimmed. Locale-independent and deterministic.
pub fn format_significant(value: f64, significant: usize) -> String {
    assert!(significant > 0);
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let exp = value.abs().log10().floor() as i32;
    if exp < -4 || exp >= significant as i32 {
        let s = format!("{:.*e}", significant - 1, value);
        match s.split_once('e') {
            Some((mantissa, exponent)) => format!("{}e{exponent}", trim_decimal(mantissa)),
            None => s,
        }
    } else {
        let decimals = (significant as i32 - 1 - exp).max(0) as usize;
        trim_decimal(&format!("{value:.decimals$}"))
    }
}

fn trim_decimal(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::relative_gap;

    #[test]
    fn relative_gap_basics() {
        assert_eq!(relative_gap(0.0, 0.0), 0.0);
        assert_eq!(relative_gap(1e-12, 0.0), 1e-12);
        assert_eq!(relative_gap(200.0, 100.0), 0.5);
        assert_eq!(relative_gap(100.0, 200.0), 0.5);
        assert_eq!(relative_gap(-1.0, 1.0), 2.0);
    }
}
