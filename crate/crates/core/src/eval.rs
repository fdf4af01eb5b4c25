//! Experiment harness: the seven-model regression suite, the classification
//! grid with ROC series and class-wise summaries, residual diagnostics, and
//! the exploratory summaries. Everything is a pure function of
//! `(ExperimentConfig, Dataset)`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{self, Dataset, FEATURE_NAMES};
use crate::linalg::Matrix;
use crate::linear::{self, LinearModel, LogisticModel};
use crate::metrics::{self, ClassificationReport, CorrelationMatrix, Histogram, RegressionMetrics, RocCurve};
use crate::preprocess::{kfold, polynomial_feature_count, train_test_split, SplitIndices, Standardizer};
use crate::svm::{self, Kernel, SvmModel};
use crate::tree::{self, DecisionTree, ForestModel, ForestParams, TreeParams, TreeTask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    All,
    Json,
    Csv,
    Markdown,
}

/// `n` points spaced evenly in log10 between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data_path: Option<String>,
    pub seed: u64,
    pub split_ratio: f64,
    pub threshold_mpg: f64,
    pub cv_folds: usize,
    /// Classification C values, in the order rows are emitted.
    pub c_grid: Vec<f64>,
    pub svr_epsilon: f64,
    pub svr_c_grid: Vec<f64>,
    pub forest_trees: usize,
    pub forest_max_features: Option<usize>,
    pub forest_min_samples_leaf: usize,
    pub poly_degree: usize,
    /// Candidate λ (ridge) and α (lasso, elastic net), searched by CV.
    pub penalty_grid: Vec<f64>,
    pub elastic_net_l1_ratio: f64,
    pub histogram_bins: usize,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            data_path: None,
            seed: 1,
            split_ratio: 0.7,
            threshold_mpg: ingest::DEFAULT_THRESHOLD_MPG,
            cv_folds: 10,
            c_grid: vec![100.0, 10.0, 1.0],
            svr_epsilon: 0.1,
            svr_c_grid: vec![1.0, 10.0, 100.0],
            forest_trees: 100,
            forest_max_features: None,
            forest_min_samples_leaf: 1,
            poly_degree: 2,
            penalty_grid: log_grid(1e-4, 1e1, 15),
            elastic_net_l1_ratio: 0.5,
            histogram_bins: 20,
            format: OutputFormat::All,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return bad(format!("split_ratio must lie in (0, 1), got {}", self.split_ratio));
        }
        if !self.threshold_mpg.is_finite() {
            return bad("threshold_mpg must be finite".into());
        }
        if self.cv_folds < 2 {
            return bad(format!("cv_folds must be >= 2, got {}", self.cv_folds));
        }
        for (name, grid) in [
            ("c_grid", &self.c_grid),
            ("svr_c_grid", &self.svr_c_grid),
            ("penalty_grid", &self.penalty_grid),
        ] {
            if grid.is_empty() || grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return bad(format!("{name} must be a non-empty list of positive numbers"));
            }
        }
        if !(self.svr_epsilon >= 0.0 && self.svr_epsilon.is_finite()) {
            return bad(format!("svr_epsilon must be >= 0, got {}", self.svr_epsilon));
        }
        if self.forest_trees == 0 || self.forest_min_samples_leaf == 0 {
            return bad("forest_trees and forest_min_samples_leaf must be >= 1".into());
        }
        if self.poly_degree == 0 {
            return bad("poly_degree must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.elastic_net_l1_ratio) {
            return bad(format!(
                "elastic_net_l1_ratio must lie in [0, 1], got {}",
                self.elastic_net_l1_ratio
            ));
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins must be >= 1".into());
        }
        Ok(())
    }

    fn forest_params(&self) -> ForestParams {
        ForestParams {
            n_trees: self.forest_trees,
            max_features: self.forest_max_features,
            min_samples_leaf: self.forest_min_samples_leaf,
            max_depth: None,
            bootstrap: true,
            seed: self.seed,
        }
    }
}

/// Facts about the loaded file, carried into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub sha256: String,
    pub n_rows: usize,
    /// 1-based data rows whose horsepower was `?`.
    pub missing_horsepower_rows: Vec<usize>,
    pub horsepower_median: f64,
    pub n_positive: usize,
    pub matches_reference: bool,
}

pub fn load_dataset(path: &Path, threshold_mpg: f64) -> Result<(Dataset, DataSummary)> {
    let (table, sha256) = ingest::read_auto_mpg(path)?;
    let summary = DataSummary {
        matches_reference: sha256 == ingest::REFERENCE_SHA256,
        sha256,
        n_rows: table.len(),
        missing_horsepower_rows: table.missing_horsepower_rows().iter().map(|i| i + 1).collect(),
        horsepower_median: ingest::horsepower_median(&table)?,
        n_positive: 0,
    };
    let dataset = ingest::build_dataset(&ingest::impute_horsepower_median(&table)?, threshold_mpg)?;
    let n_positive = dataset.label.iter().filter(|&&l| l == 1).count();
    Ok((dataset, DataSummary { n_positive, ..summary }))
}

/// A regression family with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RegressorSpec {
    Ols,
    Ridge {
        lambda: f64,
    },
    Lasso {
        alpha: f64,
    },
    ElasticNet {
        alpha: f64,
        l1_ratio: f64,
    },
    Polynomial {
        degree: usize,
    },
    /// RBF kernel with γ from the "scale" rule on the training features.
    Svr {
        c: f64,
        epsilon: f64,
    },
    RandomForest {
        params: ForestParams,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regressor {
    Linear(LinearModel),
    Svm(SvmModel),
    Forest(ForestModel),
}

impl Regressor {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        match self {
            Regressor::Linear(m) => m.predict_raw(x),
            Regressor::Svm(m) => m.predict(x),
            Regressor::Forest(m) => m.predict(x),
        }
    }
}

pub fn fit_regressor(spec: &RegressorSpec, x: &Matrix, y: &[f64]) -> Result<Regressor> {
    Ok(match *spec {
        RegressorSpec::Ols => Regressor::Linear(linear::fit_ols(x, y)?),
        RegressorSpec::Ridge { lambda } => Regressor::Linear(linear::fit_ridge(x, y, lambda)?),
        RegressorSpec::Lasso { alpha } => Regressor::Linear(linear::fit_lasso(x, y, alpha)?),
        RegressorSpec::ElasticNet { alpha, l1_ratio } => {
            Regressor::Linear(linear::fit_elastic_net(x, y, alpha, l1_ratio)?)
        }
        RegressorSpec::Polynomial { degree } => Regressor::Linear(linear::fit_polynomial(x, y, degree)?),
        RegressorSpec::Svr { c, epsilon } => {
            let kernel = Kernel::Rbf {
                gamma: svm::gamma_scale(x)?,
            };
            Regressor::Svm(svm::fit_svr(x, y, c, epsilon, kernel)?)
        }
        RegressorSpec::RandomForest { params } => {
            Regressor::Forest(tree::fit_random_forest(x, y, TreeTask::Regress, params)?)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub fold_scores: Vec<f64>,
    pub mean: f64,
}

/// k-fold R² on raw `x`, `y`. Each fold refits the feature and target
/// standardizers on its own training part before fitting the model.
pub fn cross_validate(spec: &RegressorSpec, x: &Matrix, y: &[f64], k: usize, seed: u64) -> Result<CvResult> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    let folds = kfold(x.rows(), k, seed)?;
    let mut fold_scores = Vec::with_capacity(k);
    for (f, held) in folds.folds.iter().enumerate() {
        let train = folds.training_indices(f);
        let xs = Standardizer::fit(&x.select_rows(&train))?;
        let ys = Standardizer::fit_vector(&pick(y, &train))?;
        let model = fit_regressor(
            spec,
            &xs.apply(&x.select_rows(&train))?,
            &ys.apply_vector(&pick(y, &train))?,
        )?;
        let pred = model.predict(&xs.apply(&x.select_rows(held))?)?;
        let truth = ys.apply_vector(&pick(y, held))?;
        fold_scores.push(if truth.len() == 1 {
            single_point_r2(truth[0], pred[0])?
        } else {
            metrics::r2_score(&truth, &pred)?
        });
    }
    let mean = fold_scores.iter().sum::<f64>() / k as f64;
    Ok(CvResult { fold_scores, mean })
}

/// A one-row fold has no spread of its own, so its R² is taken against the
/// training-part mean, which is 0 after target standardization.
fn single_point_r2(truth: f64, pred: f64) -> Result<f64> {
    if truth == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(1.0 - ((truth - pred) / truth).powi(2))
}

fn pick<T: Copy>(v: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| v[i]).collect()
}

/// The train/test partition with training-only standardization applied.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSplit {
    pub split: SplitIndices,
    pub x_train_raw: Matrix,
    pub y_train_raw: Vec<f64>,
    pub x_scaler: Standardizer,
    pub y_scaler: Standardizer,
    pub x_train: Matrix,
    pub x_test: Matrix,
    pub y_train: Vec<f64>,
    pub y_test: Vec<f64>,
    pub labels_train: Vec<u8>,
    pub labels_test: Vec<u8>,
}

pub fn prepare_split(dataset: &Dataset, config: &ExperimentConfig) -> Result<PreparedSplit> {
    let split = train_test_split(dataset.len(), config.split_ratio, config.seed)?;
    let x_train_raw = dataset.x.select_rows(&split.train);
    let y_train_raw = pick(&dataset.y, &split.train);
    let x_scaler = Standardizer::fit_named(&x_train_raw, Some(&dataset.column_names))?;
    let y_scaler = Standardizer::fit_named(&Matrix::column_vector(&y_train_raw)?, Some(&["mpg".to_string()]))?;
    Ok(PreparedSplit {
        x_train: x_scaler.apply(&x_train_raw)?,
        x_test: x_scaler.apply(&dataset.x.select_rows(&split.test))?,
        y_train: y_scaler.apply_vector(&y_train_raw)?,
        y_test: y_scaler.apply_vector(&pick(&dataset.y, &split.test))?,
        labels_train: pick(&dataset.label, &split.train),
        labels_test: pick(&dataset.label, &split.test),
        x_train_raw,
        y_train_raw,
        x_scaler,
        y_scaler,
        split,
    })
}

/// Outcome of a CV search over one hyperparameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub model: String,
    pub parameter: String,
    pub grid: Vec<f64>,
    pub cv_mean_r2: Vec<f64>,
    pub selected: f64,
    pub selected_cv_mean_r2: f64,
}

/// Picks the grid value with the best mean CV R²; ties keep the earlier value.
fn select_by_cv(
    model: &str,
    parameter: &str,
    grid: &[f64],
    make: impl Fn(f64) -> RegressorSpec,
    prep: &PreparedSplit,
    config: &ExperimentConfig,
) -> Result<Selection> {
    let mut scores = Vec::with_capacity(grid.len());
    for &v in grid {
        scores.push(
            cross_validate(
                &make(v),
                &prep.x_train_raw,
                &prep.y_train_raw,
                config.cv_folds,
                config.seed,
            )?
            .mean,
        );
    }
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    Ok(Selection {
        model: model.into(),
        parameter: parameter.into(),
        grid: grid.to_vec(),
        selected: grid[best],
        selected_cv_mean_r2: scores[best],
        cv_mean_r2: scores,
    })
}

pub const SVR_NAME: &str = "SVM Regression";
pub const FOREST_NAME: &str = "Random Forest Regressor";
pub const RIDGE_NAME: &str = "Ridge Regression";
pub const OLS_NAME: &str = "Linear Regression";
pub const ELASTIC_NET_NAME: &str = "Elastic Net Regression";
pub const POLYNOMIAL_NAME: &str = "Polynomial Regression";
pub const LASSO_NAME: &str = "Lasso Regression";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub model: String,
    pub metrics: Option<RegressionMetrics>,
    /// Mean 10-fold R² on the training split; linear families only.
    pub cv_mean_r2: Option<f64>,
    pub hyperparameters: BTreeMap<String, f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `(y_true, y_pred)` on the test split.
    pub true_vs_pred: Vec<(f64, f64)>,
    /// `(y_pred, y_true − y_pred)` on the test split.
    pub residuals: Vec<(f64, f64)>,
    pub residual_histogram: Histogram,
}

pub fn diagnostics(model: &LinearModel, x_test: &Matrix, y_test: &[f64], bins: usize) -> Result<Diagnostics> {
    let pred = model.predict_raw(x_test)?;
    if pred.len() != y_test.len() {
        return Err(Error::DimensionMismatch {
            expected: pred.len(),
            found: y_test.len(),
        });
    }
    let residuals: Vec<(f64, f64)> = pred.iter().zip(y_test).map(|(p, t)| (*p, t - p)).collect();
    let r: Vec<f64> = residuals.iter().map(|p| p.1).collect();
    Ok(Diagnostics {
        true_vs_pred: y_test.iter().copied().zip(pred.iter().copied()).collect(),
        residual_histogram: metrics::histogram(&r, bins)?,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    /// Sorted by test R² descending; failed rows last.
    pub rows: Vec<RegressionRow>,
    pub selections: Vec<Selection>,
    pub diagnostics: Option<Diagnostics>,
    /// `(model, R²)` in row order, for the comparison bar chart.
    pub r2_chart: Vec<(String, f64)>,
    pub n_train: usize,
    pub n_test: usize,
    pub x_scaler: Standardizer,
    pub y_scaler: Standardizer,
}

struct Candidate {
    name: &'static str,
    spec: Result<RegressorSpec>,
    p: usize,
    cv: Option<Result<f64>>,
    hyper: BTreeMap<String, f64>,
}

fn hyper(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Fits the seven regressors on the standardized training split and scores
/// them on the test split in standardized target units.
pub fn run_regression_suite(dataset: &Dataset, config: &ExperimentConfig) -> Result<RegressionReport> {
    config.validate()?;
    let prep = prepare_split(dataset, config)?;
    let d = prep.x_train.cols();
    let cv = |spec: &RegressorSpec| {
        cross_validate(spec, &prep.x_train_raw, &prep.y_train_raw, config.cv_folds, config.seed).map(|r| r.mean)
    };
    let mut selections = Vec::new();
    let mut record = |s: Result<Selection>| -> Result<(f64, f64)> {
        let s = s?;
        let out = (s.selected, s.selected_cv_mean_r2);
        selections.push(s);
        Ok(out)
    };

    let eps = config.svr_epsilon;
    let svr_sel = record(select_by_cv(
        SVR_NAME,
        "C",
        &config.svr_c_grid,
        |c| RegressorSpec::Svr { c, epsilon: eps },
        &prep,
        config,
    ));
    let ridge_sel = record(select_by_cv(
        RIDGE_NAME,
        "lambda",
        &config.penalty_grid,
        |lambda| RegressorSpec::Ridge { lambda },
        &prep,
        config,
    ));
    let l1 = config.elastic_net_l1_ratio;
    let enet_sel = record(select_by_cv(
        ELASTIC_NET_NAME,
        "alpha",
        &config.penalty_grid,
        |alpha| RegressorSpec::ElasticNet { alpha, l1_ratio: l1 },
        &prep,
        config,
    ));
    let lasso_sel = record(select_by_cv(
        LASSO_NAME,
        "alpha",
        &config.penalty_grid,
        |alpha| RegressorSpec::Lasso { alpha },
        &prep,
        config,
    ));

    let forest = config.forest_params();
    let max_features = forest
        .max_features
        .unwrap_or_else(|| tree::default_max_features(TreeTask::Regress, d));
    let poly_p = polynomial_feature_count(d, config.poly_degree).unwrap_or(usize::MAX);
    let candidates = vec![
        Candidate {
            name: SVR_NAME,
            spec: svr_sel.clone().map(|(c, _)| RegressorSpec::Svr { c, epsilon: eps }),
            p: d,
            cv: None,
            hyper: hyper(&[
                ("C", svr_sel.map_or(f64::NAN, |s| s.0)),
                ("epsilon", eps),
                ("gamma", svm::gamma_scale(&prep.x_train).unwrap_or(f64::NAN)),
            ]),
        },
        Candidate {
            name: FOREST_NAME,
            spec: Ok(RegressorSpec::RandomForest { params: forest }),
            p: d,
            cv: None,
            hyper: hyper(&[
                ("n_trees", forest.n_trees as f64),
                ("max_features", max_features as f64),
                ("min_samples_leaf", forest.min_samples_leaf as f64),
            ]),
        },
        Candidate {
            name: RIDGE_NAME,
            spec: ridge_sel.clone().map(|(lambda, _)| RegressorSpec::Ridge { lambda }),
            p: d,
            cv: Some(ridge_sel.clone().map(|s| s.1)),
            hyper: hyper(&[("lambda", ridge_sel.map_or(f64::NAN, |s| s.0))]),
        },
        Candidate {
            name: OLS_NAME,
            spec: Ok(RegressorSpec::Ols),
            p: d,
            cv: Some(cv(&RegressorSpec::Ols)),
            hyper: BTreeMap::new(),
        },
        Candidate {
            name: ELASTIC_NET_NAME,
            spec: enet_sel
                .clone()
                .map(|(alpha, _)| RegressorSpec::ElasticNet { alpha, l1_ratio: l1 }),
            p: d,
            cv: Some(enet_sel.clone().map(|s| s.1)),
            hyper: hyper(&[("alpha", enet_sel.map_or(f64::NAN, |s| s.0)), ("l1_ratio", l1)]),
        },
        Candidate {
            name: POLYNOMIAL_NAME,
            spec: Ok(RegressorSpec::Polynomial {
                degree: config.poly_degree,
            }),
            p: poly_p,
            cv: None,
            hyper: hyper(&[("degree", config.poly_degree as f64)]),
        },
        Candidate {
            name: LASSO_NAME,
            spec: lasso_sel.clone().map(|(alpha, _)| RegressorSpec::Lasso { alpha }),
            p: d,
            cv: Some(lasso_sel.clone().map(|s| s.1)),
            hyper: hyper(&[("alpha", lasso_sel.map_or(f64::NAN, |s| s.0))]),
        },
    ];

    let mut rows = Vec::with_capacity(candidates.len());
    let mut ols_model = None;
    for cand in candidates {
        let fitted = cand.spec.clone().and_then(|spec| {
            let model = fit_regressor(&spec, &prep.x_train, &prep.y_train)?;
            let pred = model.predict(&prep.x_test)?;
            let m = metrics::regression_metrics(&prep.y_test, &pred, cand.p)?;
            Ok((model, m))
        });
        let (cv_mean_r2, cv_error) = match cand.cv {
            Some(Ok(v)) => (Some(v), None),
            Some(Err(e)) => (None, Some(e)),
            None => (None, None),
        };
        let hyperparameters = cand.hyper.into_iter().filter(|(_, v)| !v.is_nan()).collect();
        let row = match fitted {
            Ok((model, m)) => {
                if cand.name == OLS_NAME {
                    if let Regressor::Linear(lm) = model {
                        ols_model = Some(lm);
                    }
                }
                RegressionRow {
                    model: cand.name.into(),
                    metrics: Some(m),
                    cv_mean_r2,
                    hyperparameters,
                    error: cv_error.map(|e| format!("cross-validation: {e}")),
                }
            }
            Err(e) => RegressionRow {
                model: cand.name.into(),
                metrics: None,
                cv_mean_r2,
                hyperparameters,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    // stable: equal R² keeps the listing order; failed rows sink
    rows.sort_by(|a, b| match (&a.metrics, &b.metrics) {
        (Some(x), Some(y)) => y.r2.total_cmp(&x.r2),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });

    let diagnostics = match &ols_model {
        Some(m) => Some(diagnostics(m, &prep.x_test, &prep.y_test, config.histogram_bins)?),
        None => None,
    };
    let r2_chart = rows
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(|m| (r.model.clone(), m.r2)))
        .collect();
    Ok(RegressionReport {
        rows,
        selections,
        diagnostics,
        r2_chart,
        n_train: prep.split.train.len(),
        n_test: prep.split.test.len(),
        x_scaler: prep.x_scaler,
        y_scaler: prep.y_scaler,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierFamily {
    SvmLinear,
    SvmRbf,
    Logistic,
    DecisionTree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub model: String,
    pub family: ClassifierFamily,
    /// `None` for the default decision tree.
    pub c: Option<f64>,
    pub report: Option<ClassificationReport>,
    pub auc: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocSeries {
    pub name: String,
    /// Grid row the curve was computed from.
    pub source: String,
    pub curve: RocCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummaryRow {
    pub model: String,
    pub source: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationGrid {
    pub rows: Vec<ClassificationRow>,
    pub roc: Vec<RocSeries>,
    /// Class-0 summary, sorted by class-0 precision descending.
    pub class0: Vec<ClassSummaryRow>,
    /// Class-1 summary, sorted by class-1 precision descending.
    pub class1: Vec<ClassSummaryRow>,
    pub rbf_gamma: f64,
    pub n_train: usize,
    pub n_test: usize,
}

enum Scorer {
    Svm(SvmModel),
    Logistic(LogisticModel),
    Tree(DecisionTree),
}

impl Scorer {
    fn scores(&self, x: &Matrix) -> Result<Vec<f64>> {
        match self {
            Scorer::Svm(m) => m.decision(x),
            Scorer::Logistic(m) => m.decision(x),
            Scorer::Tree(t) => t.predict(x),
        }
    }
}

fn score_row(
    model: String,
    family: ClassifierFamily,
    c: Option<f64>,
    fitted: Result<Scorer>,
    prep: &PreparedSplit,
) -> (ClassificationRow, Option<RocCurve>) {
    let evaluated = fitted.and_then(|s| {
        let scores = s.scores(&prep.x_test)?;
        let pred: Vec<u8> = match s {
            Scorer::Tree(_) => scores.iter().map(|&v| v as u8).collect(),
            _ => scores.iter().map(|&v| u8::from(v >= 0.0)).collect(),
        };
        let report = metrics::classification_report(&metrics::confusion_matrix(&prep.labels_test, &pred)?)?;
        Ok((report, metrics::roc_curve(&scores, &prep.labels_test)?))
    });
    match evaluated {
        Ok((report, roc)) => (
            ClassificationRow {
                model,
                family,
                c,
                report: Some(report),
                auc: Some(roc.auc),
                error: None,
            },
            Some(roc),
        ),
        Err(e) => (
            ClassificationRow {
                model,
                family,
                c,
                report: None,
                auc: None,
                error: Some(e.to_string()),
            },
            None,
        ),
    }
}

/// Best row of a family: highest accuracy, ties to the smaller C.
fn best_c(
    rows: &[(ClassificationRow, Option<RocCurve>)],
    family: ClassifierFamily,
) -> Option<&(ClassificationRow, Option<RocCurve>)> {
    let mut best: Option<&(ClassificationRow, Option<RocCurve>)> = None;
    for r in rows.iter().filter(|r| r.0.family == family) {
        let Some(rep) = &r.0.report else { continue };
        let better = match best {
            None => true,
            Some(b) => {
                let brep = b.0.report.as_ref().expect("best rows have reports");
                rep.accuracy > brep.accuracy || (rep.accuracy == brep.accuracy && r.0.c < b.0.c)
            }
        };
        if better {
            best = Some(r);
        }
    }
    best
}

pub fn svm_linear_name(c: f64) -> String {
    format!("SVM (Linear Kernel, C={c:?})")
}

pub fn svm_rbf_name(c: f64) -> String {
    format!("SVM (RBF Kernel, C={c:?})")
}

pub fn logistic_name(c: f64) -> String {
    format!("Logistic Regression (C={c:?})")
}

pub const TREE_CLASSIFIER_NAME: &str = "Decision Tree";

/// Trains the SVM-linear, SVM-RBF and logistic rows over `c_grid` plus a
/// default decision tree, all on standardized features.
pub fn run_classification_grid(dataset: &Dataset, config: &ExperimentConfig) -> Result<ClassificationGrid> {
    config.validate()?;
    let prep = prepare_split(dataset, config)?;
    let (x, labels) = (&prep.x_train, &prep.labels_train);
    let gamma = svm::gamma_scale(x)?;
    let mut rows = Vec::new();
    for &c in &config.c_grid {
        let fitted = svm::fit_svc(x, labels, c, Kernel::Linear).map(Scorer::Svm);
        rows.push(score_row(
            svm_linear_name(c),
            ClassifierFamily::SvmLinear,
            Some(c),
            fitted,
            &prep,
        ));
    }
    for &c in &config.c_grid {
        let fitted = svm::fit_svc(x, labels, c, Kernel::Rbf { gamma }).map(Scorer::Svm);
        rows.push(score_row(
            svm_rbf_name(c),
            ClassifierFamily::SvmRbf,
            Some(c),
            fitted,
            &prep,
        ));
    }
    for &c in &config.c_grid {
        let fitted = linear::fit_logistic(x, labels, c).map(Scorer::Logistic);
        rows.push(score_row(
            logistic_name(c),
            ClassifierFamily::Logistic,
            Some(c),
            fitted,
            &prep,
        ));
    }
    let target: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
    let params = TreeParams {
        seed: config.seed,
        ..TreeParams::default()
    };
    let fitted = tree::fit_cart(x, &target, TreeTask::Classify, params).map(Scorer::Tree);
    rows.push(score_row(
        TREE_CLASSIFIER_NAME.into(),
        ClassifierFamily::DecisionTree,
        None,
        fitted,
        &prep,
    ));

    let at_c = |family: ClassifierFamily, c: f64| rows.iter().find(|r| r.0.family == family && r.0.c == Some(c));
    let first_linear = config
        .c_grid
        .first()
        .and_then(|&c| at_c(ClassifierFamily::SvmLinear, c));
    let mut roc = Vec::new();
    let mut push_roc = |name: &str, row: Option<&(ClassificationRow, Option<RocCurve>)>| {
        if let Some((r, Some(curve))) = row {
            roc.push(RocSeries {
                name: name.into(),
                source: r.model.clone(),
                curve: curve.clone(),
            });
        }
    };
    push_roc("SVM with Linear Kernel (Initial Run)", first_linear);
    push_roc("SVM with Linear Kernel (C=1.0)", at_c(ClassifierFamily::SvmLinear, 1.0));
    push_roc("SVM with RBF Kernel (C=1.0)", at_c(ClassifierFamily::SvmRbf, 1.0));
    push_roc("Logistic Regression (C=1.0)", at_c(ClassifierFamily::Logistic, 1.0));

    let sources = [
        ("SVM with Linear Kernel", best_c(&rows, ClassifierFamily::SvmLinear)),
        ("SVM No Kernel", at_c(ClassifierFamily::SvmLinear, 1.0)),
        ("SVM with RBF Kernel", best_c(&rows, ClassifierFamily::SvmRbf)),
        ("Logistic Regression", best_c(&rows, ClassifierFamily::Logistic)),
        (
            "Decision Tree Classification",
            rows.iter().find(|r| r.0.family == ClassifierFamily::DecisionTree),
        ),
    ];
    let summary = |class: u8| {
        let mut out: Vec<ClassSummaryRow> = sources
            .iter()
            .filter_map(|(name, row)| {
                let (r, _) = (*row)?;
                let rep = r.report.as_ref()?;
                let m = if class == 0 { &rep.class0 } else { &rep.class1 };
                Some(ClassSummaryRow {
                    model: (*name).into(),
                    source: r.model.clone(),
                    precision: m.precision,
                    recall: m.recall,
                    f1: m.f1,
                })
            })
            .collect();
        out.sort_by(|a, b| b.precision.total_cmp(&a.precision));
        out
    };
    let (class0, class1) = (summary(0), summary(1));
    Ok(ClassificationGrid {
        rows: rows.into_iter().map(|r| r.0).collect(),
        roc,
        class0,
        class1,
        rbf_gamma: gamma,
        n_train: prep.split.train.len(),
        n_test: prep.split.test.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedHistogram {
    pub column: String,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaReport {
    pub correlation: CorrelationMatrix,
    /// Distribution of mpg and every feature.
    pub histograms: Vec<NamedHistogram>,
    /// Columns of the pair-plot table: mpg, the seven features, label.
    pub pair_columns: Vec<String>,
    pub pair_rows: Vec<Vec<f64>>,
}

pub fn run_eda(dataset: &Dataset, config: &ExperimentConfig) -> Result<EdaReport> {
    config.validate()?;
    let (m, names) = dataset.with_target();
    let correlation = metrics::correlation_matrix(&m, &names)?;
    let histograms = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            Ok(NamedHistogram {
                column: name.clone(),
                histogram: metrics::histogram(&m.column(j), config.histogram_bins)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pair_columns = names;
    pair_columns.push("label".into());
    let pair_rows = (0..m.rows())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(f64::from(dataset.label[i]));
            r
        })
        .collect();
    Ok(EdaReport {
        correlation,
        histograms,
        pair_columns,
        pair_rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub data: DataSummary,
    pub library_version: String,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub eda: Option<EdaReport>,
    pub regression: Option<RegressionReport>,
    pub classification: Option<ClassificationGrid>,
    pub provenance: Provenance,
}

/// Which parts of the report to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub eda: bool,
    pub regression: bool,
    pub classification: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        eda: true,
        regression: true,
        classification: true,
    };
}

pub fn run_report(
    dataset: &Dataset,
    data: DataSummary,
    config: &ExperimentConfig,
    sections: Sections,
) -> Result<Report> {
    config.validate()?;
    Ok(Report {
        eda: sections.eda.then(|| run_eda(dataset, config)).transpose()?,
        regression: sections
            .regression
            .then(|| run_regression_suite(dataset, config))
            .transpose()?,
        classification: sections
            .classification
            .then(|| run_classification_grid(dataset, config))
            .transpose()?,
        provenance: Provenance {
            config: config.clone(),
            data,
            library_version: env!("CARGO_PKG_VERSION").into(),
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn synthetic(n: usize, seed: u64, noise: f64) -> (Matrix, Vec<f64>) {
        let mut rng = SeededRng::new(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| rng.unit() * 4.0 - 2.0).collect())
            .collect();
        let y = rows
            .iter()
            .map(|r| 1.5 * r[0] - 2.0 * r[1] + 0.5 * r[2] + 3.0 + noise * (rng.unit() - 0.5))
            .collect();
        (Matrix::from_rows(&rows).unwrap(), y)
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-4, 1e1, 15);
        assert_eq!(g.len(), 15);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert!((g[14] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn perfect_linear_data_folds_all_one() {
        let (x, y) = synthetic(40, 3, 0.0);
        let cv = cross_validate(&RegressorSpec::Ols, &x, &y, 10, 1).unwrap();
        assert!(cv.fold_scores.iter().all(|s| (s - 1.0).abs() < 1e-10));
    }

    #[test]
    fn leave_one_out_boundary() {
        let (x, y) = synthetic(20, 4, 0.3);
        let cv = cross_validate(&RegressorSpec::Ols, &x, &y, 20, 1).unwrap();
        assert_eq!(cv.fold_scores.len(), 20);
        assert!(cv.fold_scores.iter().all(|s| s.is_finite()));
    }

    #[test]
    fn constant_fold_surfaces_error() {
        let (x, mut y) = synthetic(20, 4, 0.3);
        let folds = kfold(20, 2, 1).unwrap();
        for &i in &folds.folds[0] {
            y[i] = 7.0;
        }
        assert!(cross_validate(&RegressorSpec::Ols, &x, &y, 2, 1).is_err());
    }

    #[test]
    fn cv_mean_is_fold_average() {
        let (x, y) = synthetic(50, 5, 0.5);
        let cv = cross_validate(&RegressorSpec::Ridge { lambda: 1.0 }, &x, &y, 5, 9).unwrap();
        let mean = cv.fold_scores.iter().sum::<f64>() / cv.fold_scores.len() as f64;
        assert_eq!(cv.mean, mean);
        assert_eq!(cv.fold_scores.len(), 5);
    }

    #[test]
    fn perfect_model_diagnostics() {
        let (x, y) = synthetic(30, 6, 0.0);
        let m = linear::fit_ols(&x, &y).unwrap();
        let d = diagnostics(&m, &x, &y, 20).unwrap();
        assert!(d.residuals.iter().all(|r| r.1.abs() < 1e-10));
        assert_eq!(d.residual_histogram.counts.iter().sum::<usize>(), 30);
    }

    #[test]
    fn train_residuals_sum_to_zero() {
        let (x, y) = synthetic(60, 7, 2.0);
        let m = linear::fit_ols(&x, &y).unwrap();
        let d = diagnostics(&m, &x, &y, 20).unwrap();
        assert!(d.residuals.iter().map(|r| r.1).sum::<f64>().abs() < 1e-8);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig {
            split_ratio: 1.0,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            c_grid: vec![],
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn regressor_specs_fit_and_predict() {
        let (x, y) = synthetic(40, 8, 0.2);
        let specs = [
            RegressorSpec::Ols,
            RegressorSpec::Ridge { lambda: 0.5 },
            RegressorSpec::Lasso { alpha: 0.01 },
            RegressorSpec::ElasticNet {
                alpha: 0.01,
                l1_ratio: 0.5,
            },
            RegressorSpec::Polynomial { degree: 2 },
            RegressorSpec::Svr { c: 10.0, epsilon: 0.1 },
            RegressorSpec::RandomForest {
                params: ForestParams {
                    n_trees: 10,
                    ..ForestParams::default()
                },
            },
        ];
        for spec in specs {
            let m = fit_regressor(&spec, &x, &y).unwrap();
            let r2 = metrics::r2_score(&y, &m.predict(&x).unwrap()).unwrap();
            assert!(r2 > 0.8, "{spec:?}: {r2}");
        }
    }
}
