//! Named, column-oriented numeric data with explicit centering.
//!
//! All fitting routines in this crate work on zero-mean columns and carry
//! no intercept term. `Dataset::center` subtracts and records the column
//! means; reports recover the implied intercept from them.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    /// Sample means recorded when the dataset was centered; empty before.
    means: Vec<f64>,
    centered: bool,
}

impl Dataset {
    /// Build an uncentered dataset, validating shape and finiteness.
    pub fn new<S: Into<String>>(names: Vec<S>, columns: Vec<Vec<f64>>) -> Result<Dataset> {
        let names: Vec<String> = names.into_iter().map(|s| s.into()).collect();
        if names.len() != columns.len() {
            return Err(Error::InvalidSpec(format!(
                "{} column names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if columns.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::NoRows);
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::ColumnLengthMismatch {
                    column: name.clone(),
                    expected: n,
                    actual: col.len(),
                });
            }
            for (row, v) in col.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        column: name.clone(),
                        row,
                    });
                }
            }
        }
        for i in 1..names.len() {
            if names[..i].contains(&names[i]) {
                return Err(Error::DuplicateColumn(names[i].clone()));
            }
        }
        Ok(Dataset {
            names,
            columns,
            means: Vec::new(),
            centered: false,
        })
    }

    /// Subtract each column's sample mean and record it. Re-centering an
    /// already-centered dataset is a no-op that keeps the recorded means.
    pub fn center(&self) -> Result<Dataset> {
        if self.centered {
            return Ok(self.clone());
        }
        let n = self.n_rows();
        if n < 2 {
            return Err(Error::TooFewRowsToCenter(n));
        }
        let mut means = Vec::with_capacity(self.columns.len());
        let mut columns = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            let mean = col.iter().sum::<f64>() / n as f64;
            means.push(mean);
            columns.push(col.iter().map(|v| v - mean).collect());
        }
        Ok(Dataset {
            names: self.names.clone(),
            columns,
            means,
            centered: true,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.columns[self.index_of(name)?])
    }

    pub fn column_at(&self, index: usize) -> &[f64] {
        &self.columns[index]
    }

    /// Mean recorded at centering time; 0 for a dataset built centered.
    pub fn mean_of(&self, name: &str) -> Result<f64> {
        let idx = self.index_of(name)?;
        Ok(if self.means.is_empty() {
            0.0
        } else {
            self.means[idx]
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }
}
