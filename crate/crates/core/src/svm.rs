//! Kernel machines: C-support-vector classification and ε-support-vector
//! regression, both solved by sequential minimal optimization.
//!
//! Both duals are cast into one form,
//!
//! ```text
//! min ½ aᵀQa + pᵀa   s.t.  zᵀa = 0,  0 ≤ aₜ ≤ C,   Qₛₜ = zₛ zₜ K(xₛ, xₜ)
//! ```
//!
//! with `z = ±1`. Classification uses `a = α`, `z = y`, `p = −1`. Regression
//! stacks `a = (α, α*)` over `2n` variables with `z = (+1…, −1…)` and
//! `p = (ε − y, ε + y)`.
//!
//! Each iteration takes the maximal violator from the up set, pairs it with
//! the low-set index promising the largest objective decrease (second-order
//! selection), and solves the two-variable subproblem exactly with box
//! clipping. The solver stops once the gap falls
//! to `tol`, which bounds every point's KKT violation by `tol`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(self.eval_unchecked(u, v))
    }

    fn eval_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(u, v),
            Kernel::Rbf { gamma } => {
                let d2: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Kernel::Rbf { gamma } = *self {
            if gamma <= 0.0 || !gamma.is_finite() {
                return Err(Error::InvalidParameter(format!("RBF γ must be > 0, got {gamma}")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Rbf { .. } => "rbf",
        }
    }
}

/// The "scale" heuristic: `γ = 1 / (d · var(X))` over all entries of `X`.
pub fn gamma_scale(x: &Matrix) -> Result<f64> {
    let vals = x.as_slice();
    if vals.is_empty() {
        return Err(Error::EmptyInput("cannot derive γ from an empty matrix".into()));
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(Error::ConstantColumn {
            column: "all features".into(),
        });
    }
    Ok(1.0 / (x.cols() as f64 * var))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvmTask {
    Classify,
    Regress,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub task: SvmTask,
    pub support_vectors: Matrix,
    /// Training-row index of each support vector.
    pub support_indices: Vec<usize>,
    /// `αᵢ·yᵢ` (classification) or `αᵢ − αᵢ*` (regression).
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub kernel: Kernel,
    pub c: f64,
    pub epsilon: f64,
    pub n_train: usize,
}

impl SvmModel {
    /// Raw decision values `Σ coefᵢ K(svᵢ, x) + b`.
    pub fn decision(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.support_vectors.cols() && self.support_vectors.rows() > 0 {
            return Err(Error::DimensionMismatch {
                expected: self.support_vectors.cols(),
                found: x.cols(),
            });
        }
        Ok((0..x.rows())
            .map(|r| {
                let row = x.row(r);
                self.dual_coefs
                    .iter()
                    .enumerate()
                    .map(|(s, a)| a * self.kernel.eval_unchecked(self.support_vectors.row(s), row))
                    .sum::<f64>()
                    + self.bias
            })
            .collect())
    }

    /// Class labels from the sign of the decision value; a score of exactly
    /// zero goes to class 1.
    pub fn predict_labels(&self, x: &Matrix) -> Result<Vec<u8>> {
        Ok(self.decision(x)?.into_iter().map(|s| u8::from(s >= 0.0)).collect())
    }

    /// Regression output; identical to [`decision`](Self::decision).
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        self.decision(x)
    }

    pub fn n_support(&self) -> usize {
        self.dual_coefs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoOptions {
    pub tol: f64,
    /// Cap on pair updates (not sweeps).
    pub max_iter: usize,
    /// Record the dual objective after every pair update.
    pub trace: bool,
}

impl Default for SmoOptions {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_iter: 10_000_000,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final maximal-violating-pair gap.
    pub gap: f64,
    /// Dual objective in maximization form, starting at the zero point.
    pub objective_trace: Vec<f64>,
}

struct DualProblem {
    kernel_matrix: Vec<f64>,
    n: usize,
    /// Kernel row of each dual variable (identity for SVC, `t mod n` for SVR).
    index: Vec<usize>,
    z: Vec<f64>,
    p: Vec<f64>,
    c: f64,
}

struct DualSolution {
    a: Vec<f64>,
    rho: f64,
    stats: SolveStats,
}

impl DualProblem {
    fn q(&self, s: usize, t: usize) -> f64 {
        self.z[s] * self.z[t] * self.kernel_matrix[self.index[s] * self.n + self.index[t]]
    }

    fn objective(&self, a: &[f64], g: &[f64]) -> f64 {
        // ½aᵀQa + pᵀa = ½ Σ aₜ (Gₜ + pₜ), reported as a maximization
        -0.5 * a
            .iter()
            .zip(g.iter().zip(&self.p))
            .map(|(at, (gt, pt))| at * (gt + pt))
            .sum::<f64>()
    }

    // t indexes several parallel arrays at once
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, opts: SmoOptions) -> Result<DualSolution> {
        let l = self.z.len();
        let c = self.c;
        let mut a = vec![0.0; l];
        let mut g = self.p.clone();
        let mut stats = SolveStats::default();
        if opts.trace {
            stats.objective_trace.push(0.0);
        }
        let in_up = |t: usize, a: &[f64]| (self.z[t] > 0.0 && a[t] < c) || (self.z[t] < 0.0 && a[t] > 0.0);
        let in_low = |t: usize, a: &[f64]| (self.z[t] > 0.0 && a[t] > 0.0) || (self.z[t] < 0.0 && a[t] < c);
        loop {
            // i: maximal violator; j: largest guaranteed decrease of the
            // two-variable subproblem (second-order selection)
            let mut gmax = f64::NEG_INFINITY;
            let mut i = usize::MAX;
            for t in 0..l {
                let v = -self.z[t] * g[t];
                if in_up(t, &a) && v > gmax {
                    gmax = v;
                    i = t;
                }
            }
            let mut gmin = f64::INFINITY;
            let mut j = usize::MAX;
            let mut best_drop = f64::INFINITY;
            if i != usize::MAX {
                for t in 0..l {
                    if !in_low(t, &a) {
                        continue;
                    }
                    let v = -self.z[t] * g[t];
                    gmin = gmin.min(v);
                    let b = gmax - v;
                    if b > 0.0 {
                        let quad = self.q(i, i) + self.q(t, t) - 2.0 * self.z[i] * self.z[t] * self.q(i, t);
                        let drop = -(b * b) / quad.max(1e-12);
                        if drop < best_drop {
                            best_drop = drop;
                            j = t;
                        }
                    }
                }
            }
            let gap = if i == usize::MAX || j == usize::MAX {
                0.0
            } else {
                gmax - gmin
            };
            stats.gap = gap;
            if gap <= opts.tol {
                break;
            }
            if stats.iterations >= opts.max_iter {
                return Err(Error::SmoIterationCap {
                    iterations: stats.iterations,
                    max_violation: gap,
                    dual: a,
                });
            }
            stats.iterations += 1;

            let (old_i, old_j) = (a[i], a[j]);
            let qii = self.q(i, i);
            let qjj = self.q(j, j);
            let qij = self.q(i, j);
            if self.z[i] != self.z[j] {
                let quad = (qii + qjj + 2.0 * qij).max(1e-12);
                let delta = (-g[i] - g[j]) / quad;
                let diff = a[i] - a[j];
                a[i] += delta;
                a[j] += delta;
                if diff > 0.0 {
                    if a[j] < 0.0 {
                        a[j] = 0.0;
                        a[i] = diff;
                    }
                } else if a[i] < 0.0 {
                    a[i] = 0.0;
                    a[j] = -diff;
                }
                if diff > 0.0 {
                    if a[i] > c {
                        a[i] = c;
                        a[j] = c - diff;
                    }
                } else if a[j] > c {
                    a[j] = c;
                    a[i] = c + diff;
                }
            } else {
                let quad = (qii + qjj - 2.0 * qij).max(1e-12);
                let delta = (g[i] - g[j]) / quad;
                let sum = a[i] + a[j];
                a[i] -= delta;
                a[j] += delta;
                if sum > c {
                    if a[i] > c {
                        a[i] = c;
                        a[j] = sum - c;
                    }
                } else if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = sum;
                }
                if sum > c {
                    if a[j] > c {
                        a[j] = c;
                        a[i] = sum - c;
                    }
                } else if a[i] < 0.0 {
                    a[i] = 0.0;
                    a[j] = sum;
                }
            }
            let (di, dj) = (a[i] - old_i, a[j] - old_j);
            for (t, gt) in g.iter_mut().enumerate() {
                *gt += self.q(i, t) * di + self.q(j, t) * dj;
            }
            if opts.trace {
                stats.objective_trace.push(self.objective(&a, &g));
            }
        }

        // bias: average over free variables, else midpoint of the feasible interval
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut free, mut sum_free) = (0usize, 0.0);
        for t in 0..l {
            let yg = self.z[t] * g[t];
            if a[t] >= c {
                if self.z[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if a[t] <= 0.0 {
                if self.z[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                sum_free += yg;
            }
        }
        let rho = if free > 0 {
            sum_free / free as f64
        } else {
            (ub + lb) / 2.0
        };
        Ok(DualSolution { a, rho, stats })
    }
}

fn kernel_matrix(x: &Matrix, kernel: Kernel) -> Vec<f64> {
    let n = x.rows();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval_unchecked(x.row(i), x.row(j));
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

fn check_c(c: f64) -> Result<()> {
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "C must be a positive finite number, got {c}"
        )));
    }
    Ok(())
}

fn build_model(task: SvmTask, x: &Matrix, coefs: Vec<f64>, rho: f64, kernel: Kernel, c: f64, epsilon: f64) -> SvmModel {
    let support_indices: Vec<usize> = (0..coefs.len()).filter(|&i| coefs[i] != 0.0).collect();
    SvmModel {
        task,
        support_vectors: x.select_rows(&support_indices),
        dual_coefs: support_indices.iter().map(|&i| coefs[i]).collect(),
        support_indices,
        bias: -rho,
        kernel,
        c,
        epsilon,
        n_train: x.rows(),
    }
}

pub fn fit_svc_with(
    x: &Matrix,
    labels: &[u8],
    c: f64,
    kernel: Kernel,
    opts: SmoOptions,
) -> Result<(SvmModel, SolveStats)> {
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
    check_c(c)?;
    kernel.validate()?;
    let n = x.rows();
    let z: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let problem = DualProblem {
        kernel_matrix: kernel_matrix(x, kernel),
        n,
        index: (0..n).collect(),
        p: vec![-1.0; n],
        z: z.clone(),
        c,
    };
    let sol = problem.solve(opts)?;
    let coefs: Vec<f64> = sol.a.iter().zip(&z).map(|(a, y)| a * y).collect();
    Ok((
        build_model(SvmTask::Classify, x, coefs, sol.rho, kernel, c, 0.0),
        sol.stats,
    ))
}

/// C-SVC on labels in {0, 1} (mapped to ∓1).
pub fn fit_svc(x: &Matrix, labels: &[u8], c: f64, kernel: Kernel) -> Result<SvmModel> {
    fit_svc_with(x, labels, c, kernel, SmoOptions::default()).map(|(m, _)| m)
}

pub fn fit_svr_with(
    x: &Matrix,
    y: &[f64],
    c: f64,
    epsilon: f64,
    kernel: Kernel,
    opts: SmoOptions,
) -> Result<(SvmModel, SolveStats)> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    if x.rows() < 2 {
        return Err(Error::InvalidParameter("SVR needs at least 2 rows".into()));
    }
    check_c(c)?;
    if epsilon < 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("ε must be >= 0, got {epsilon}")));
    }
    kernel.validate()?;
    let n = x.rows();
    let mut z = vec![1.0; n];
    z.extend(std::iter::repeat_n(-1.0, n));
    let mut p: Vec<f64> = y.iter().map(|v| epsilon - v).collect();
    p.extend(y.iter().map(|v| epsilon + v));
    let problem = DualProblem {
        kernel_matrix: kernel_matrix(x, kernel),
        n,
        index: (0..n).chain(0..n).collect(),
        z,
        p,
        c,
    };
    let sol = problem.solve(opts)?;
    let coefs: Vec<f64> = (0..n).map(|i| sol.a[i] - sol.a[n + i]).collect();
    Ok((
        build_model(SvmTask::Regress, x, coefs, sol.rho, kernel, c, epsilon),
        sol.stats,
    ))
}

/// ε-SVR.
pub fn fit_svr(x: &Matrix, y: &[f64], c: f64, epsilon: f64, kernel: Kernel) -> Result<SvmModel> {
    fit_svr_with(x, y, c, epsilon, kernel, SmoOptions::default()).map(|(m, _)| m)
}

/// Per-training-row dual variable recovered from a model (zero for
/// non-support rows).
fn full_coefs(model: &SvmModel) -> Vec<f64> {
    let mut coefs = vec![0.0; model.n_train];
    for (&i, &a) in model.support_indices.iter().zip(&model.dual_coefs) {
        coefs[i] = a;
    }
    coefs
}

/// Largest KKT violation over the training set, in decision-value units.
///
/// Classification, with margin `m = y·f(x)`: `α = 0 ⇒ m ≥ 1`,
/// `0 < α < C ⇒ m = 1`, `α = C ⇒ m ≤ 1`. Regression, with residual
/// `r = y − f(x)`: inside the tube when both multipliers are zero, on its
/// upper (lower) edge when `α` (`α*`) is free, outside when at `C`.
pub fn kkt_violation(model: &SvmModel, x: &Matrix, targets: &[f64]) -> Result<f64> {
    if x.rows() != model.n_train || targets.len() != model.n_train {
        return Err(Error::DimensionMismatch {
            expected: model.n_train,
            found: x.rows().min(targets.len()),
        });
    }
    let f = model.decision(x)?;
    let coefs = full_coefs(model);
    let c = model.c;
    let at_c = |a: f64| a >= c * (1.0 - 1e-12);
    let mut worst: f64 = 0.0;
    for i in 0..model.n_train {
        let v = match model.task {
            SvmTask::Classify => {
                let y = if targets[i] > 0.5 { 1.0 } else { -1.0 };
                let alpha = coefs[i] * y;
                let m = y * f[i];
                if alpha <= 0.0 {
                    (1.0 - m).max(0.0)
                } else if at_c(alpha) {
                    (m - 1.0).max(0.0)
                } else {
                    (m - 1.0).abs()
                }
            }
            SvmTask::Regress => {
                let r = targets[i] - f[i];
                let eps = model.epsilon;
                let theta = coefs[i];
                if theta == 0.0 {
                    (r.abs() - eps).max(0.0)
                } else if theta > 0.0 {
                    if at_c(theta) {
                        (eps - r).max(0.0)
                    } else {
                        (r - eps).abs()
                    }
                } else if at_c(-theta) {
                    (r + eps).max(0.0)
                } else {
                    (r + eps).abs()
                }
            }
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

/// `Σ αᵢyᵢ` (classification) or `Σ (αᵢ − αᵢ*)` (regression).
pub fn equality_residual(model: &SvmModel) -> f64 {
    model.dual_coefs.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn two_point() -> (Matrix, Vec<u8>) {
        (Matrix::from_rows(&[vec![-1.0], vec![1.0]]).unwrap(), vec![0, 1])
    }

    #[test]
    fn kernel_values() {
        assert_eq!(Kernel::Linear.eval(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0);
        let rbf = Kernel::Rbf { gamma: 1.0 };
        assert_eq!(rbf.eval(&[0.3, -2.0], &[0.3, -2.0]).unwrap(), 1.0);
        let d = 2f64.ln().sqrt();
        assert!((rbf.eval(&[0.0], &[d]).unwrap() - 0.5).abs() < 1e-15);
        assert!(rbf.eval(&[0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn two_point_svc_analytic() {
        let (x, y) = two_point();
        let m = fit_svc(&x, &y, 10.0, Kernel::Linear).unwrap();
        assert_eq!(m.n_support(), 2);
        // α = 0.5 each; coefs α·y = (−0.5, +0.5)
        assert!((m.dual_coefs[0] + 0.5).abs() < 1e-12);
        assert!((m.dual_coefs[1] - 0.5).abs() < 1e-12);
        assert!(m.bias.abs() < 1e-12);
        let w: f64 = m
            .dual_coefs
            .iter()
            .enumerate()
            .map(|(s, a)| a * m.support_vectors.row(s)[0])
            .sum();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicated_two_point_same_solution() {
        let x = Matrix::from_rows(&[vec![-1.0], vec![1.0], vec![-1.0], vec![1.0]]).unwrap();
        for c in [0.5, 1.0, 100.0] {
            let m = fit_svc(&x, &[0, 1, 0, 1], c, Kernel::Linear).unwrap();
            let t = Matrix::from_rows(&[vec![-2.0], vec![0.0], vec![2.0]]).unwrap();
            let s = m.decision(&t).unwrap();
            assert!((s[0] + 2.0).abs() < 1e-9 && s[1].abs() < 1e-9 && (s[2] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tie_rule_and_signs() {
        let (x, y) = two_point();
        let m = fit_svc(&x, &y, 10.0, Kernel::Linear).unwrap();
        let t = Matrix::from_rows(&[vec![0.0], vec![2.0], vec![-2.0]]).unwrap();
        let s = m.decision(&t).unwrap();
        assert!(s[0].abs() < 1e-12);
        assert!((s[1] - 2.0).abs() < 1e-12);
        assert!((s[2] + 2.0).abs() < 1e-12);
        // force an exact zero score to exercise the tie rule
        let exact = SvmModel { bias: 0.0, ..m.clone() };
        let at_zero = Matrix::from_rows(&[vec![0.0]]).unwrap();
        assert_eq!(exact.decision(&at_zero).unwrap()[0], 0.0);
        assert_eq!(exact.predict_labels(&t).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn svr_constant_target_has_no_support_vectors() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![5.0]]).unwrap();
        let m = fit_svr(&x, &[3.0; 4], 1.0, 0.1, Kernel::Rbf { gamma: 0.5 }).unwrap();
        assert_eq!(m.n_support(), 0);
        let p = m
            .predict(&Matrix::from_rows(&[vec![-7.0], vec![0.5]]).unwrap())
            .unwrap();
        assert!(p.iter().all(|v| (v - 3.0).abs() < 1e-12));
    }

    #[test]
    fn svr_fits_a_line_within_the_tube() {
        let xs: Vec<Vec<f64>> = (0..15).map(|i| vec![i as f64 / 7.0 - 1.0]).collect();
        let x = Matrix::from_rows(&xs).unwrap();
        let y: Vec<f64> = xs.iter().map(|r| r[0]).collect();
        let opts = SmoOptions {
            tol: 1e-8,
            ..Default::default()
        };
        let (m, _) = fit_svr_with(&x, &y, 1000.0, 0.01, Kernel::Linear, opts).unwrap();
        let p = m.predict(&x).unwrap();
        for (a, b) in p.iter().zip(&y) {
            assert!((a - b).abs() <= 0.01 + 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn single_class_rejected() {
        let (x, _) = two_point();
        assert_eq!(fit_svc(&x, &[1, 1], 1.0, Kernel::Linear), Err(Error::SingleClass));
    }

    #[test]
    fn iteration_cap_reports_diagnostics() {
        let mut rng = SeededRng::new(1);
        let rows: Vec<Vec<f64>> = (0..30).map(|_| vec![rng.unit(), rng.unit()]).collect();
        let labels: Vec<u8> = (0..30).map(|i| (i % 2) as u8).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let opts = SmoOptions {
            max_iter: 2,
            ..Default::default()
        };
        match fit_svc_with(&x, &labels, 10.0, Kernel::Rbf { gamma: 1.0 }, opts) {
            Err(Error::SmoIterationCap {
                iterations,
                dual,
                max_violation,
            }) => {
                assert_eq!(iterations, 2);
                assert_eq!(dual.len(), 30);
                assert!(max_violation > 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dual_objective_non_decreasing_and_kkt_clean() {
        let mut rng = SeededRng::new(2);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.unit() * 4.0 - 2.0, rng.unit() * 4.0 - 2.0])
            .collect();
        let labels: Vec<u8> = rows
            .iter()
            .map(|r| u8::from(r[0] * r[0] + r[1] + 0.3 * (rng.unit() - 0.5) > 0.5))
            .collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let opts = SmoOptions {
            trace: true,
            ..Default::default()
        };
        let (m, stats) = fit_svc_with(&x, &labels, 5.0, Kernel::Rbf { gamma: 0.7 }, opts).unwrap();
        for w in stats.objective_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-10 * w[0].abs().max(1.0));
        }
        let targets: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
        assert!(kkt_violation(&m, &x, &targets).unwrap() <= 2e-3);
        assert!(equality_residual(&m).abs() < 1e-8);
        assert!(m.dual_coefs.iter().all(|a| a.abs() <= m.c));
    }

    #[test]
    fn gamma_scale_on_standardized_data_is_about_one_over_d() {
        let mut rng = SeededRng::new(3);
        let x = Matrix::from_vec(200, 4, (0..800).map(|_| rng.unit() * 2.0 - 1.0).collect()).unwrap();
        let z = crate::preprocess::Standardizer::fit(&x).unwrap().apply(&x).unwrap();
        assert!((gamma_scale(&z).unwrap() - 0.25).abs() < 1e-12);
    }
}
