//! Randomized invariants of the residualization machinery.
//!
//! Datasets are built from a seeded Gaussian stream with chained
//! regressors (each column leans on the previous one) and per-column
//! scales spanning four orders of magnitude, so the solver sees
//! correlated, badly scaled designs rather than isotropic noise.

mod common;

use common::{build_dataset, regressor_names, sum_squares};
use partialreg::{
    decompose, fit_ols, normal_equations_oracle, partial_correlation, prt_v1, prt_v2, relative_gap,
    Dataset, Error,
};
use proptest::prelude::*;

prop_compose! {
    /// (dataset, k) with mild conditioning so tolerance checks are fair.
    fn well_conditioned()(
        seed in any::<u64>(),
        n in 12usize..=120,
        exponents in prop::collection::vec(-2.0f64..2.0, 1..=6),
    ) -> (Dataset, usize) {
        (build_dataset(seed, n, &exponents), exponents.len())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_route_agrees_with_the_multivariate_fit((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);
        let rows = decompose(&data, "y", &names).unwrap();
        for row in &rows {
            prop_assert!(
                relative_gap(row.beta_prt_v1, row.beta_multivariate) <= 1e-8,
                "v1 {} vs multivariate {} for {}",
                row.beta_prt_v1, row.beta_multivariate, row.focus
            );
            prop_assert!(
                relative_gap(row.beta_prt_v2, row.beta_multivariate) <= 1e-8,
                "v2 {} vs multivariate {} for {}",
                row.beta_prt_v2, row.beta_multivariate, row.focus
            );
            // The standalone entry points walk the same residualization.
            let controls: Vec<&String> =
                names.iter().filter(|n| **n != row.focus).collect();
            let v1 = prt_v1(&data, "y", &row.focus, &controls).unwrap();
            let v2 = prt_v2(&data, "y", &row.focus, &controls).unwrap();
            prop_assert!(relative_gap(v1, row.beta_prt_v1) <= 1e-12);
            prop_assert!(relative_gap(v2, row.beta_prt_v2) <= 1e-12);
        }
    }

    #[test]
    fn independent_solvers_agree((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);
        let oracle = normal_equations_oracle(&data, "y", &names).unwrap();
        for (a, b) in fit.beta.iter().zip(&oracle) {
            prop_assert!(relative_gap(*a, *b) <= 1e-8, "qr {a} vs normal equations {b}");
        }
    }

    #[test]
    fn residuals_are_orthogonal_to_every_regressor((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);
        let resid_norm = sum_squares(&fit.residuals).sqrt();
        for name in &names {
            let x = data.column(name).unwrap();
            let inner: f64 = x.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            let scale = resid_norm * sum_squares(x).sqrt();
            prop_assert!(
                inner.abs() <= 1e-8 * scale.max(1.0),
                "<resid, {name}> = {inner}, scale {scale}"
            );
        }
    }

    #[test]
    fn rescaling_a_regressor_rescales_only_its_coefficient(
        (data, k) in well_conditioned(),
        focus_pick in 0usize..6,
        factor in prop::sample::select(vec![1e-3, 0.25, 4.0, 1e3]),
    ) {
        let names = regressor_names(k);
        let focus = focus_pick % k;
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);

        let mut columns: Vec<Vec<f64>> =
            data.names().iter().map(|n| data.column(n).unwrap().to_vec()).collect();
        for v in &mut columns[focus + 1] {
            *v *= factor;
        }
        let scaled = Dataset::new(data.names().to_vec(), columns).unwrap().center().unwrap();
        let refit = fit_ols(&scaled, "y", &names).unwrap();
        prop_assume!(refit.condition_estimate < 1e6);

        for j in 0..k {
            let expected = if j == focus { fit.beta[j] / factor } else { fit.beta[j] };
            prop_assert!(
                relative_gap(refit.beta[j], expected) <= 1e-9,
                "beta[{j}] {} vs expected {expected} after scaling x{} by {factor}",
                refit.beta[j], focus + 1
            );
        }
        prop_assert!((refit.r_squared - fit.r_squared).abs() <= 1e-10);
    }

    #[test]
    fn rescaling_the_response_rescales_every_coefficient(
        (data, k) in well_conditioned(),
        factor in prop::sample::select(vec![1e-2, 0.5, 8.0, 1e2]),
    ) {
        let names = regressor_names(k);
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);

        let mut columns: Vec<Vec<f64>> =
            data.names().iter().map(|n| data.column(n).unwrap().to_vec()).collect();
        for v in &mut columns[0] {
            *v *= factor;
        }
        let scaled = Dataset::new(data.names().to_vec(), columns).unwrap().center().unwrap();
        let refit = fit_ols(&scaled, "y", &names).unwrap();

        for j in 0..k {
            prop_assert!(
                relative_gap(refit.beta[j], factor * fit.beta[j]) <= 1e-9,
                "beta[{j}] {} vs {} x {factor}", refit.beta[j], fit.beta[j]
            );
        }
        prop_assert!((refit.r_squared - fit.r_squared).abs() <= 1e-10);
    }

    #[test]
    fn regressor_order_does_not_change_named_coefficients((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        let fit = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(fit.condition_estimate < 1e6);
        let mut reversed = names.clone();
        reversed.reverse();
        let refit = fit_ols(&data, "y", &reversed).unwrap();
        for (j, name) in names.iter().enumerate() {
            let pos = reversed.iter().position(|r| r == name).unwrap();
            prop_assert!(
                relative_gap(fit.beta[j], refit.beta[pos]) <= 1e-12,
                "{name}: {} vs {}", fit.beta[j], refit.beta[pos]
            );
        }
        prop_assert!((fit.r_squared - refit.r_squared).abs() <= 1e-12);
    }

    #[test]
    fn residualization_never_inflates_variance((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        prop_assume!(fit_ols(&data, "y", &names).unwrap().condition_estimate < 1e6);
        for row in decompose(&data, "y", &names).unwrap() {
            let original = sum_squares(data.column(&row.focus).unwrap());
            let reduced = sum_squares(&row.delta);
            prop_assert!(
                reduced <= original * (1.0 + 1e-12),
                "ssq(delta) {reduced} > ssq({}) {original}", row.focus
            );
        }
    }

    #[test]
    fn partial_correlation_is_symmetric_bit_for_bit(
        (data, k) in well_conditioned(),
        pick in 0usize..30,
    ) {
        prop_assume!(k >= 2);
        let names = regressor_names(k);
        prop_assume!(fit_ols(&data, "y", &names).unwrap().condition_estimate < 1e6);
        let a = pick % k;
        let b = (a + 1 + pick / k % (k - 1)) % k;
        prop_assume!(a != b);
        let controls: Vec<&String> = names
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != a && *j != b)
            .map(|(_, n)| n)
            .collect();
        let ab = partial_correlation(&data, &names[a], &names[b], &controls).unwrap();
        let ba = partial_correlation(&data, &names[b], &names[a], &controls).unwrap();
        prop_assert_eq!(ab.to_bits(), ba.to_bits(), "{} vs {}", ab, ba);
    }

    #[test]
    fn single_regressor_collapses_to_the_simple_slope(
        seed in any::<u64>(),
        n in 12usize..=120,
        exponent in -2.0f64..2.0,
    ) {
        let data = build_dataset(seed, n, &[exponent]);
        let x = data.column("x1").unwrap();
        let y = data.column("y").unwrap();
        let simple: f64 =
            x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sum_squares(x);
        let fit = fit_ols(&data, "y", &["x1"]).unwrap();
        prop_assert!(relative_gap(fit.beta[0], simple) <= 1e-12);

        // No controls: delta is the column itself and the two correlation
        // measures coincide exactly.
        let rows = decompose(&data, "y", &["x1"]).unwrap();
        prop_assert_eq!(rows.len(), 1);
        let row = &rows[0];
        prop_assert_eq!(row.delta.as_slice(), x);
        prop_assert_eq!(row.semi_partial_r2.to_bits(), row.partial_r2.to_bits());
        prop_assert_eq!(
            (row.partial_correlation * row.partial_correlation).to_bits(),
            row.partial_r2.to_bits()
        );
    }

    #[test]
    fn ordering_of_correlation_measures_is_structural((data, k) in well_conditioned()) {
        let names = regressor_names(k);
        for row in decompose(&data, "y", &names).unwrap() {
            prop_assert!(row.semi_partial_r2 >= 0.0);
            prop_assert!(row.semi_partial_r2 <= row.partial_r2);
            prop_assert!(row.partial_r2 <= 1.0);
            prop_assert!((-1.0..=1.0).contains(&row.partial_correlation));
            prop_assert_eq!(
                (row.partial_correlation * row.partial_correlation).to_bits(),
                row.partial_r2.to_bits()
            );
        }
    }

    #[test]
    fn explained_share_identities_hold((data, k) in well_conditioned()) {
        prop_assume!(k >= 2);
        let names = regressor_names(k);
        let full = fit_ols(&data, "y", &names).unwrap();
        prop_assume!(full.condition_estimate < 1e6);
        for row in decompose(&data, "y", &names).unwrap() {
            let controls: Vec<&String> =
                names.iter().filter(|n| **n != row.focus).collect();
            let reduced = fit_ols(&data, "y", &controls).unwrap();
            prop_assume!(reduced.condition_estimate < 1e6);

            // Adding the focus to the controls lifts R^2 by the
            // semi-partial share.
            let increment = full.r_squared - reduced.r_squared;
            prop_assert!(
                (row.semi_partial_r2 - increment).abs() <= 1e-10,
                "semi {} vs R^2 increment {increment} for {}",
                row.semi_partial_r2, row.focus
            );

            // The partial share is the semi-partial share rescaled to the
            // response variance the controls leave unexplained.
            let unexplained = 1.0 - reduced.r_squared;
            prop_assume!(unexplained > 1e-6);
            prop_assert!(
                relative_gap(row.partial_r2, row.semi_partial_r2 / unexplained) <= 1e-8,
                "partial {} vs semi/unexplained {} for {}",
                row.partial_r2, row.semi_partial_r2 / unexplained, row.focus
            );
        }
    }

    #[test]
    fn duplicated_columns_are_rejected_not_absorbed(
        seed in any::<u64>(),
        n in 12usize..=60,
    ) {
        let data = build_dataset(seed, n, &[0.0, 0.0]);
        let mut columns: Vec<Vec<f64>> =
            data.names().iter().map(|c| data.column(c).unwrap().to_vec()).collect();
        columns.push(columns[1].clone());
        let mut names = data.names().to_vec();
        names.push("x1_copy".to_string());
        let rigged = Dataset::new(names, columns).unwrap().center().unwrap();

        // The shared fit sees the rank deficiency.
        let err = decompose(&rigged, "y", &["x1", "x2", "x1_copy"]).unwrap_err();
        prop_assert!(err.is_degeneracy(), "unexpected error {err}");

        // Residualizing a column on its own copy leaves nothing behind.
        let err = prt_v1(&rigged, "y", "x1", &["x1_copy"]).unwrap_err();
        prop_assert!(matches!(err, Error::CollinearFocus(_)), "unexpected error {err}");
    }
}
