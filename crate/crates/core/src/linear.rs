//! Linear models: ordinary least squares, ridge, lasso, elastic net,
//! polynomial-on-OLS, and L2-regularized logistic regression.
//!
//! Intercepts are never penalized. Lasso and elastic net minimize
//!
//! ```text
//! (1/2n)·‖y − β₀ − Xβ‖² + α·ρ·‖β‖₁ + (α/2)·(1 − ρ)·‖β‖²
//! ```
//!
//! (ρ = `l1_ratio`, ρ = 1 for lasso) by cyclic coordinate descent. Ridge uses
//! the sum-of-squares convention `‖y − β₀ − Xβ‖² + λ‖β‖²`, so elastic net with
//! ρ = 0 equals ridge with `λ = n·α`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, inf_norm, least_squares, solve_spd, Matrix};
use crate::preprocess::polynomial_features;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearFamily {
    Ols,
    Ridge,
    Lasso,
    ElasticNet,
    Polynomial,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearHyperparams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub family: LinearFamily,
    pub hyperparams: LinearHyperparams,
}

impl LinearModel {
    /// `β₀ + Xβ`. Polynomial models expect already-expanded features; see
    /// [`LinearModel::predict_raw`].
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                found: x.cols(),
            });
        }
        Ok((0..x.rows())
            .map(|i| self.intercept + dot(x.row(i), &self.coefficients))
            .collect())
    }

    /// Like [`predict`](Self::predict) but expands raw features first for the
    /// polynomial family.
    pub fn predict_raw(&self, x: &Matrix) -> Result<Vec<f64>> {
        match (self.family, self.hyperparams.degree) {
            (LinearFamily::Polynomial, Some(d)) => self.predict(&polynomial_features(x, d)?),
            _ => self.predict(x),
        }
    }

    /// Number of coefficients that are exactly zero.
    pub fn sparsity(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c == 0.0).count()
    }

    pub fn coefficient_norm(&self) -> f64 {
        dot(&self.coefficients, &self.coefficients).sqrt()
    }
}

fn check_xy(x: &Matrix, y: &[f64]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    if x.rows() == 0 {
        return Err(Error::EmptyInput("no training rows".into()));
    }
    Ok(())
}

pub fn fit_ols(x: &Matrix, y: &[f64]) -> Result<LinearModel> {
    check_xy(x, y)?;
    if x.rows() <= x.cols() {
        return Err(Error::InvalidParameter(format!(
            "OLS needs n > p (n = {}, p = {})",
            x.rows(),
            x.cols()
        )));
    }
    let beta = least_squares(&x.with_intercept(), y)?;
    Ok(LinearModel {
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        family: LinearFamily::Ols,
        hyperparams: LinearHyperparams::default(),
    })
}

/// Degree-`degree` monomial expansion followed by OLS.
pub fn fit_polynomial(x: &Matrix, y: &[f64], degree: usize) -> Result<LinearModel> {
    let mut m = fit_ols(&polynomial_features(x, degree)?, y)?;
    m.family = LinearFamily::Polynomial;
    m.hyperparams.degree = Some(degree);
    Ok(m)
}

fn column_means(x: &Matrix) -> Vec<f64> {
    let n = x.rows() as f64;
    let mut means = vec![0.0; x.cols()];
    for i in 0..x.rows() {
        for (m, v) in means.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    means
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn fit_ridge(x: &Matrix, y: &[f64], lambda: f64) -> Result<LinearModel> {
    check_xy(x, y)?;
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("ridge λ must be >= 0, got {lambda}")));
    }
    let xm = column_means(x);
    let ym = mean(y);
    let mut xc = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            xc[(i, j)] -= xm[j];
        }
    }
    let yc: Vec<f64> = y.iter().map(|v| v - ym).collect();
    let mut a = xc.gram();
    for j in 0..x.cols() {
        a[(j, j)] += lambda;
    }
    let beta = solve_spd(&a, &xc.tr_matvec(&yc)?)?;
    Ok(LinearModel {
        intercept: ym - dot(&xm, &beta),
        coefficients: beta,
        family: LinearFamily::Ridge,
        hyperparams: LinearHyperparams {
            lambda: Some(lambda),
            ..Default::default()
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateDescentOptions {
    /// Converged once no coefficient (or the intercept) moves more than this in a sweep.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for CoordinateDescentOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_sweeps: 10_000,
        }
    }
}

pub fn soft_threshold(value: f64, threshold: f64) -> f64 {
    if value > threshold {
        value - threshold
    } else if value < -threshold {
        value + threshold
    } else {
        0.0
    }
}

/// Cyclic coordinate descent for `(1/2n)‖r‖² + l1‖β‖₁ + (l2/2)‖β‖²`.
fn coordinate_descent(
    x: &Matrix,
    y: &[f64],
    l1: f64,
    l2: f64,
    opts: CoordinateDescentOptions,
) -> Result<(f64, Vec<f64>)> {
    let (n, p) = (x.rows(), x.cols());
    let nf = n as f64;
    let cols: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let z: Vec<f64> = cols.iter().map(|c| dot(c, c) / nf).collect();
    let mut beta = vec![0.0; p];
    let mut intercept = mean(y);
    let mut resid: Vec<f64> = y.iter().map(|v| v - intercept).collect();
    let mut max_change = f64::INFINITY;
    for _ in 0..opts.max_sweeps {
        max_change = 0.0;
        for j in 0..p {
            if z[j] == 0.0 {
                continue;
            }
            let rho = dot(&cols[j], &resid) / nf + z[j] * beta[j];
            let updated = soft_threshold(rho, l1) / (z[j] + l2);
            let delta = updated - beta[j];
            if delta != 0.0 {
                for (r, xv) in resid.iter_mut().zip(&cols[j]) {
                    *r -= delta * xv;
                }
                beta[j] = updated;
                max_change = max_change.max(delta.abs());
            }
        }
        let shift = mean(&resid);
        if shift != 0.0 {
            intercept += shift;
            resid.iter_mut().for_each(|r| *r -= shift);
            max_change = max_change.max(shift.abs());
        }
        if max_change < opts.tol {
            return Ok((intercept, beta));
        }
    }
    Err(Error::CoordinateDescentNotConverged {
        sweeps: opts.max_sweeps,
        max_change,
        intercept,
        coefficients: beta,
    })
}

pub fn fit_elastic_net_with(
    x: &Matrix,
    y: &[f64],
    alpha: f64,
    l1_ratio: f64,
    opts: CoordinateDescentOptions,
) -> Result<LinearModel> {
    check_xy(x, y)?;
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("α must be > 0, got {alpha}")));
    }
    if !(0.0..=1.0).contains(&l1_ratio) {
        return Err(Error::InvalidParameter(format!(
            "l1_ratio must lie in [0, 1], got {l1_ratio}"
        )));
    }
    let (intercept, coefficients) = coordinate_descent(x, y, alpha * l1_ratio, alpha * (1.0 - l1_ratio), opts)?;
    Ok(LinearModel {
        coefficients,
        intercept,
        family: LinearFamily::ElasticNet,
        hyperparams: LinearHyperparams {
            alpha: Some(alpha),
            l1_ratio: Some(l1_ratio),
            ..Default::default()
        },
    })
}

pub fn fit_elastic_net(x: &Matrix, y: &[f64], alpha: f64, l1_ratio: f64) -> Result<LinearModel> {
    fit_elastic_net_with(x, y, alpha, l1_ratio, CoordinateDescentOptions::default())
}

pub fn fit_lasso_with(x: &Matrix, y: &[f64], alpha: f64, opts: CoordinateDescentOptions) -> Result<LinearModel> {
    let mut m = fit_elastic_net_with(x, y, alpha, 1.0, opts)?;
    m.family = LinearFamily::Lasso;
    m.hyperparams.l1_ratio = None;
    Ok(m)
}

pub fn fit_lasso(x: &Matrix, y: &[f64], alpha: f64) -> Result<LinearModel> {
    fit_lasso_with(x, y, alpha, CoordinateDescentOptions::default())
}

/// Smallest α at which the lasso solution is identically zero:
/// `max_j |(1/n) x_jᵀ (y − ȳ)|`.
pub fn lasso_alpha_max(x: &Matrix, y: &[f64]) -> Result<f64> {
    check_xy(x, y)?;
    let ym = mean(y);
    let yc: Vec<f64> = y.iter().map(|v| v - ym).collect();
    Ok(inf_norm(&x.tr_matvec(&yc)?) / x.rows() as f64)
}

// ---------------------------------------------------------------------------
// Logistic regression

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub c: f64,
    pub iterations: usize,
}

pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + eᵗ)` without overflow.
fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

impl LogisticModel {
    /// Linear scores `β₀ + Xβ`.
    pub fn decision(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                found: x.cols(),
            });
        }
        Ok((0..x.rows())
            .map(|i| self.intercept + dot(x.row(i), &self.coefficients))
            .collect())
    }

    /// `σ(β₀ + Xβ)`; probability of class 1.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Vec<f64>> {
        Ok(self.decision(x)?.into_iter().map(sigmoid).collect())
    }

    /// Class 1 when the probability is at least one half.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        Ok(self.decision(x)?.into_iter().map(|s| u8::from(s >= 0.0)).collect())
    }
}

fn check_labels(x: &Matrix, labels: &[u8]) -> Result<()> {
    if x.rows() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: labels.len(),
        });
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidParameter("labels must be 0 or 1".into()));
    }
    if !labels.contains(&0) || !labels.contains(&1) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// `Σ log(1 + exp(−sᵢ fᵢ)) + ‖β‖² / (2C)` with `s = ±1`; `weights[0]` is the
/// unpenalized intercept.
pub fn logistic_objective(x: &Matrix, labels: &[u8], c: f64, weights: &[f64]) -> f64 {
    let mut loss = 0.0;
    for (i, &l) in labels.iter().enumerate() {
        let f = weights[0] + dot(x.row(i), &weights[1..]);
        let s = if l == 1 { 1.0 } else { -1.0 };
        loss += log1p_exp(-s * f);
    }
    loss + dot(&weights[1..], &weights[1..]) / (2.0 * c)
}

/// Analytic gradient of [`logistic_objective`].
pub fn logistic_gradient(x: &Matrix, labels: &[u8], c: f64, weights: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; weights.len()];
    for (i, &l) in labels.iter().enumerate() {
        let row = x.row(i);
        let f = weights[0] + dot(row, &weights[1..]);
        let s = if l == 1 { 1.0 } else { -1.0 };
        let coef = -s * sigmoid(-s * f);
        g[0] += coef;
        for (gj, xv) in g[1..].iter_mut().zip(row) {
            *gj += coef * xv;
        }
    }
    for (gj, w) in g[1..].iter_mut().zip(&weights[1..]) {
        *gj += w / c;
    }
    g
}

fn logistic_hessian(x: &Matrix, c: f64, weights: &[f64]) -> Matrix {
    let p = weights.len();
    let mut h = Matrix::zeros(p, p);
    for i in 0..x.rows() {
        let row = x.row(i);
        let pr = sigmoid(weights[0] + dot(row, &weights[1..]));
        let w = pr * (1.0 - pr);
        for a in 0..p {
            let xa = if a == 0 { 1.0 } else { row[a - 1] };
            for b in a..p {
                let xb = if b == 0 { 1.0 } else { row[b - 1] };
                h[(a, b)] += w * xa * xb;
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
    }
    for j in 1..p {
        h[(j, j)] += 1.0 / c;
    }
    h
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_GRAD_TOL: f64 = 1e-8;

/// Damped Newton fit. Also returns the objective after each accepted step,
/// starting from the all-zero initial point.
pub fn fit_logistic_traced(x: &Matrix, labels: &[u8], c: f64) -> Result<(LogisticModel, Vec<f64>)> {
    check_labels(x, labels)?;
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "C must be a positive finite number, got {c}"
        )));
    }
    let p = x.cols() + 1;
    let mut w = vec![0.0; p];
    let mut obj = logistic_objective(x, labels, c, &w);
    let mut trace = vec![obj];
    let mut grad = logistic_gradient(x, labels, c, &w);
    let mut iterations = 0;
    while inf_norm(&grad) >= NEWTON_GRAD_TOL {
        if iterations == NEWTON_MAX_ITER {
            return Err(Error::NewtonNotConverged {
                iterations,
                gradient_norm: inf_norm(&grad),
                coefficients: w,
            });
        }
        iterations += 1;
        let h = logistic_hessian(x, c, &w);
        let neg_g: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = solve_spd(&h, &neg_g)?;
        let slope = dot(&grad, &step);
        let mut t = 1.0;
        let (next_w, next_obj) = loop {
            let cand: Vec<f64> = w.iter().zip(&step).map(|(a, d)| a + t * d).collect();
            let cand_obj = logistic_objective(x, labels, c, &cand);
            if cand_obj <= obj + 1e-4 * t * slope {
                break (cand, cand_obj);
            }
            // Near the optimum the decrease drops below the objective's
            // rounding; fall back to the gradient norm as the merit.
            if cand_obj <= obj + 1e-12 * obj.abs().max(1.0)
                && inf_norm(&logistic_gradient(x, labels, c, &cand)) < inf_norm(&grad)
            {
                break (cand, cand_obj.min(obj));
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NewtonNotConverged {
                    iterations,
                    gradient_norm: inf_norm(&grad),
                    coefficients: w,
                });
            }
        };
        w = next_w;
        obj = next_obj;
        trace.push(obj);
        grad = logistic_gradient(x, labels, c, &w);
    }
    Ok((
        LogisticModel {
            intercept: w[0],
            coefficients: w[1..].to_vec(),
            c,
            iterations,
        },
        trace,
    ))
}

pub fn fit_logistic(x: &Matrix, labels: &[u8], c: f64) -> Result<LogisticModel> {
    fit_logistic_traced(x, labels, c).map(|(m, _)| m)
}
