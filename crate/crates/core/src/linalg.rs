//! Small dense kernels used by the solvers.
//!
//! Everything here works on column vectors (`&[f64]`) or small square
//! matrices stored as rows (`Vec<Vec<f64>>`). Problem sizes are tiny
//! (k rarely above 10), so clarity wins over blocking tricks.

// Triangular factorizations read better with explicit indices than with
// iterator chains over half-open row prefixes.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Condition-estimate threshold beyond which a design is declared
/// rank deficient (reciprocal of the 1e-10 relative pivot floor).
pub(crate) const RANK_DEFICIENCY_THRESHOLD: f64 = 1.0e10;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sum_squares(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Householder QR factorization with column pivoting (Businger-Golub).
///
/// Columns are pivoted by largest trailing norm, so the diagonal of R is
/// non-increasing in magnitude and `|r[0]|/|r[k-1]|` serves as a cheap
/// condition estimate of the design matrix.
pub(crate) struct PivotedQr {
    /// Column-major working storage: upper part holds R, the rest holds
    /// the Householder unit vectors.
    cols: Vec<Vec<f64>>,
    /// Signed diagonal of R.
    diag: Vec<f64>,
    /// `pivot[j]` = original index of the column now at position j.
    pivot: Vec<usize>,
    n: usize,
    k: usize,
}

pub(crate) struct QrDiagnostics {
    pub rank: usize,
    pub condition_estimate: f64,
    /// Original index of the first column whose pivot collapsed, if any.
    pub deficient_column: Option<usize>,
}

impl PivotedQr {
    pub fn factor(columns: &[&[f64]]) -> Self {
        let k = columns.len();
        let n = columns[0].len();
        let mut cols: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
        let mut pivot: Vec<usize> = (0..k).collect();
        let mut diag = vec![0.0; k];

        for j in 0..k {
            // Recompute trailing norms exactly; k is small enough that the
            // classical downdating formula is not worth its instability.
            let mut best = j;
            let mut best_norm = sum_squares(&cols[j][j..]);
            for m in (j + 1)..k {
                let norm = sum_squares(&cols[m][j..]);
                if norm > best_norm {
                    best = m;
                    best_norm = norm;
                }
            }
            cols.swap(j, best);
            pivot.swap(j, best);

            let norm = best_norm.sqrt();
            if norm == 0.0 {
                // Trailing block is exactly zero; remaining diagonals stay 0.
                break;
            }
            let alpha = if cols[j][j] > 0.0 { -norm } else { norm };
            diag[j] = alpha;

            // Reflector v = x - alpha * e1, normalized to unit length.
            cols[j][j] -= alpha;
            let vnorm = sum_squares(&cols[j][j..]).sqrt();
            if vnorm > 0.0 {
                for v in &mut cols[j][j..] {
                    *v /= vnorm;
                }
            }
            for m in (j + 1)..k {
                let (head, tail) = cols.split_at_mut(m);
                let v = &head[j][j..];
                let target = &mut tail[0][j..];
                let proj = 2.0 * dot(v, target);
                for (t, vi) in target.iter_mut().zip(v) {
                    *t -= proj * vi;
                }
            }
        }

        PivotedQr {
            cols,
            diag,
            pivot,
            n,
            k,
        }
    }

    pub fn diagnostics(&self) -> QrDiagnostics {
        let d0 = self.diag[0].abs();
        let mut rank = 0;
        let mut deficient_column = None;
        for j in 0..self.k {
            let dj = self.diag[j].abs();
            if dj > 0.0 && d0 / dj <= RANK_DEFICIENCY_THRESHOLD {
                rank += 1;
            } else if deficient_column.is_none() {
                deficient_column = Some(self.pivot[j]);
            }
        }
        let condition_estimate = if rank == 0 {
            f64::INFINITY
        } else if self.diag[self.k - 1].abs() > 0.0 {
            d0 / self.diag[self.k - 1].abs()
        } else {
            f64::INFINITY
        };
        QrDiagnostics {
            rank,
            condition_estimate,
            deficient_column,
        }
    }

    /// Least-squares solution of `X b = y` for the full-rank case.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.n);
        let mut qty = y.to_vec();
        for j in 0..self.k {
            if self.diag[j] == 0.0 {
                break;
            }
            let v = &self.cols[j][j..];
            let target = &mut qty[j..];
            let proj = 2.0 * dot(v, target);
            for (t, vi) in target.iter_mut().zip(v) {
                *t -= proj * vi;
            }
        }

        // Back substitution on R (entries above the diagonal live in cols).
        let mut z = vec![0.0; self.k];
        for j in (0..self.k).rev() {
            let mut s = qty[j];
            for m in (j + 1)..self.k {
                s -= self.cols[m][j] * z[m];
            }
            z[j] = s / self.diag[j];
        }

        let mut beta = vec![0.0; self.k];
        for j in 0..self.k {
            beta[self.pivot[j]] = z[j];
        }
        beta
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// `a` is row-major and consumed. Used as the normal-equations oracle
/// and for small population-algebra solves; deliberately shares no code
/// with the QR path.
pub(crate) fn solve_gaussian(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let k = a.len();
    debug_assert!(a.iter().all(|row| row.len() == k));
    debug_assert_eq!(b.len(), k);

    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::SingularNormalEquations);
    }

    for j in 0..k {
        let mut p = j;
        for i in (j + 1)..k {
            if a[i][j].abs() > a[p][j].abs() {
                p = i;
            }
        }
        if a[p][j].abs() <= scale * 1e-13 {
            return Err(Error::SingularNormalEquations);
        }
        a.swap(j, p);
        b.swap(j, p);
        for i in (j + 1)..k {
            let factor = a[i][j] / a[j][j];
            if factor != 0.0 {
                for m in j..k {
                    a[i][m] -= factor * a[j][m];
                }
                b[i] -= factor * b[j];
            }
        }
    }

    let mut x = vec![0.0; k];
    for j in (0..k).rev() {
        let mut s = b[j];
        for m in (j + 1)..k {
            s -= a[j][m] * x[m];
        }
        x[j] = s / a[j][j];
    }
    Ok(x)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub(crate) fn cholesky_lower(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = a.len();
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i][j];
            for m in 0..j {
                s -= l[i][m] * l[j][m];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: s });
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Orthonormalize columns in place with modified Gram-Schmidt, run twice
/// so the result is orthogonal to machine precision. Columns must be
/// linearly independent.
pub(crate) fn orthonormalize_columns(cols: &mut [Vec<f64>]) -> Result<()> {
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let q = &head[i];
                let target = &mut tail[0];
                let r = dot(q, target);
                for (t, qi) in target.iter_mut().zip(q) {
                    *t -= r * qi;
                }
            }
        }
        let norm = sum_squares(&cols[j]).sqrt();
        if norm <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::SingularNormalEquations);
        }
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    Ok(())
}

pub(crate) fn check_symmetric(a: &[Vec<f64>]) -> Result<()> {
    let d = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..d {
        if a[i].len() != d {
            return Err(Error::InvalidSpec(format!(
                "covariance row {} has {} entries, expected {}",
                i,
                a[i].len(),
                d
            )));
        }
        for j in 0..i {
            if (a[i][j] - a[j][i]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}
