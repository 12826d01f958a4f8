#![allow(dead_code)]

use partialreg::{Dataset, NormalStream};

/// Correlated test dataset: k regressors with chain mixing (weight 0.4 on
/// the previous column), response = weighted sum + unit noise, then each
/// regressor is stretched by 10^exponent. Centered and ready to fit.
pub fn build_dataset(seed: u64, n: usize, exponents: &[f64]) -> Dataset {
    let k = exponents.len();
    let mut stream = NormalStream::new(seed);
    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut col = vec![0.0; n];
        stream.fill_standard_normal(&mut col);
        if j > 0 {
            for i in 0..n {
                col[i] += 0.4 * xs[j - 1][i];
            }
        }
        xs.push(col);
    }
    let mut y = vec![0.0; n];
    stream.fill_standard_normal(&mut y);
    for (j, x) in xs.iter().enumerate() {
        let weight = 1.0 - 0.3 * j as f64;
        for i in 0..n {
            y[i] += weight * x[i];
        }
    }
    let mut names = vec!["y".to_string()];
    let mut columns = vec![y];
    for (j, mut col) in xs.into_iter().enumerate() {
        let scale = 10f64.powf(exponents[j]);
        for v in &mut col {
            *v *= scale;
        }
        names.push(format!("x{}", j + 1));
        columns.push(col);
    }
    Dataset::new(names, columns).unwrap().center().unwrap()
}

pub fn regressor_names(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("x{j}")).collect()
}

pub fn sum_squares(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}
