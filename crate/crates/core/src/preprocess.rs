//! Standardization, seeded train/test splits, k-fold partitions, and
//! polynomial feature expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::SeededRng;

/// Per-column z-scaling learned from one matrix and applied to others.
///
/// Standard deviations use the population convention (divisor `n`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub fitted_on: usize,
}

fn column_stats(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    (mean, var.sqrt())
}

impl Standardizer {
    /// Fits on `m`. `names`, when given, labels the columns in errors.
    pub fn fit_named(m: &Matrix, names: Option<&[String]>) -> Result<Self> {
        let n = m.rows();
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "standardizer needs at least 2 rows, got {n}"
            )));
        }
        let mut means = Vec::with_capacity(m.cols());
        let mut stds = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let (mean, std) = column_stats((0..n).map(|i| m[(i, j)]), n);
            let scale = mean.abs().max(1.0);
            if std <= 1e-12 * scale {
                let column = names
                    .and_then(|ns| ns.get(j).cloned())
                    .unwrap_or_else(|| format!("#{j}"));
                return Err(Error::ConstantColumn { column });
            }
            means.push(mean);
            stds.push(std);
        }
        Ok(Self {
            means,
            stds,
            fitted_on: n,
        })
    }

    pub fn fit(m: &Matrix) -> Result<Self> {
        Self::fit_named(m, None)
    }

    /// Fits a single-column standardizer to a vector.
    pub fn fit_vector(v: &[f64]) -> Result<Self> {
        Self::fit_named(&Matrix::column_vector(v)?, Some(&["target".to_string()]))
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    fn check(&self, cols: usize) -> Result<()> {
        if cols != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: cols,
            });
        }
        Ok(())
    }

    pub fn apply(&self, m: &Matrix) -> Result<Matrix> {
        self.check(m.cols())?;
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = (m[(i, j)] - self.means[j]) / self.stds[j];
            }
        }
        Ok(out)
    }

    pub fn invert(&self, m: &Matrix) -> Result<Matrix> {
        self.check(m.cols())?;
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = m[(i, j)] * self.stds[j] + self.means[j];
            }
        }
        Ok(out)
    }

    pub fn apply_vector(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(1)?;
        Ok(v.iter().map(|x| (x - self.means[0]) / self.stds[0]).collect())
    }

    pub fn invert_vector(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(1)?;
        Ok(v.iter().map(|x| x * self.stds[0] + self.means[0]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub ratio: f64,
}

/// Train-set size for `n` rows: `ratio · n` rounded half up.
pub fn train_size(n: usize, ratio: f64) -> usize {
    (ratio * n as f64 + 0.5).floor() as usize
}

/// Shuffles `0..n` with the seeded generator and takes the first
/// `round(ratio · n)` indices as the training set.
pub fn train_test_split(n: usize, ratio: f64, seed: u64) -> Result<SplitIndices> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("split needs n >= 2, got {n}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split ratio must lie in (0, 1), got {ratio}"
        )));
    }
    let n_train = train_size(n, ratio);
    if n_train == 0 || n_train == n {
        return Err(Error::InvalidParameter(format!(
            "split of n = {n} at ratio {ratio} leaves an empty side"
        )));
    }
    let perm = SeededRng::new(seed).permutation(n);
    Ok(SplitIndices {
        train: perm[..n_train].to_vec(),
        test: perm[n_train..].to_vec(),
        seed,
        ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldIndices {
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
}

impl FoldIndices {
    /// Indices outside fold `k`, in fold order.
    pub fn training_indices(&self, k: usize) -> Vec<usize> {
        self.folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .flat_map(|(_, f)| f.iter().copied())
            .collect()
    }
}

/// Deals a shuffled `0..n` into `k` contiguous blocks; the first `n mod k`
/// blocks get one extra element.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<FoldIndices> {
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k-fold needs 2 <= k <= n (k = {k}, n = {n})"
        )));
    }
    let perm = SeededRng::new(seed).permutation(n);
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(perm[start..start + size].to_vec());
        start += size;
    }
    Ok(FoldIndices { folds, seed })
}

pub const DEFAULT_POLY_FEATURE_CAP: usize = 10_000;

/// Number of expanded columns: `C(d + degree, degree) − 1`.
pub fn polynomial_feature_count(d: usize, degree: usize) -> Option<usize> {
    let mut c: usize = 1;
    for i in 1..=degree {
        c = c.checked_mul(d + i)? / i;
    }
    Some(c - 1)
}

/// Exponent tuples of every monomial of total degree 1..=degree.
///
/// Ordered by degree, then lexicographically over non-decreasing column
/// indices, so `d = 2, degree = 2` yields `x1, x2, x1², x1·x2, x2²`.
fn monomials(d: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for deg in 1..=degree {
        let mut combo = vec![0usize; deg];
        loop {
            out.push(combo.clone());
            // next non-decreasing combination
            let mut pos = deg;
            while pos > 0 && combo[pos - 1] == d - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            combo[pos - 1] += 1;
            let v = combo[pos - 1];
            for c in combo.iter_mut().skip(pos) {
                *c = v;
            }
        }
    }
    out
}

pub fn polynomial_features_capped(m: &Matrix, degree: usize, cap: usize) -> Result<Matrix> {
    if degree < 1 {
        return Err(Error::InvalidParameter("polynomial degree must be >= 1".into()));
    }
    let d = m.cols();
    if d == 0 {
        return Err(Error::InvalidParameter("no input columns to expand".into()));
    }
    let count = polynomial_feature_count(d, degree)
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "degree {degree} on {d} columns exceeds the feature cap of {cap}"
            ))
        })?;
    let terms = monomials(d, degree);
    debug_assert_eq!(terms.len(), count);
    let mut data = Vec::with_capacity(m.rows() * count);
    for i in 0..m.rows() {
        let row = m.row(i);
        for t in &terms {
            data.push(t.iter().map(|&j| row[j]).product());
        }
    }
    Matrix::from_vec(m.rows(), count, data)
}

pub fn polynomial_features(m: &Matrix, degree: usize) -> Result<Matrix> {
    polynomial_features_capped(m, degree, DEFAULT_POLY_FEATURE_CAP)
}
