//! Python bindings. Matrices travel as lists of rows, labels as 0/1 ints,
//! and structured results (reports, configs, fitted specs) as plain dicts.

use std::path::PathBuf;

use mpgw_core::eval::{self, ExperimentConfig, RegressorSpec, Sections};
use mpgw_core::linear::{self, LinearModel, LogisticModel};
use mpgw_core::svm::{self, Kernel, SvmModel};
use mpgw_core::tree::{self, DecisionTree, ForestModel, ForestParams, TreeParams, TreeTask};
use mpgw_core::{metrics, preprocess, Matrix};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::de::DeserializeOwned;
use serde::Serialize;

create_exception!(
    mpgw,
    DataError,
    PyValueError,
    "The input data is missing, unreadable or malformed."
);
create_exception!(
    mpgw,
    NumericalError,
    PyArithmeticError,
    "A solver or metric could not produce a value."
);

fn err(e: mpgw_core::Error) -> PyErr {
    match e {
        mpgw_core::Error::InvalidParameter(_) | mpgw_core::Error::DimensionMismatch { .. } => {
            PyValueError::new_err(e.to_string())
        }
        e if e.is_data_error() => DataError::new_err(e.to_string()),
        e => NumericalError::new_err(e.to_string()),
    }
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: DeserializeOwned>(value: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = value.py().import("json")?.call_method1("dumps", (value,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// The parsed, imputed and labelled data set.
#[pyclass(module = "mpgw", frozen)]
struct Dataset {
    inner: mpgw_core::Dataset,
    summary: eval::DataSummary,
}

#[pymethods]
impl Dataset {
    #[getter]
    fn x(&self) -> Vec<Vec<f64>> {
        self.inner.x.to_rows()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.inner.y.clone()
    }

    #[getter]
    fn labels(&self) -> Vec<u8> {
        self.inner.label.clone()
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.column_names.clone()
    }

    #[getter]
    fn threshold_mpg(&self) -> f64 {
        self.inner.threshold_mpg
    }

    /// sha256, row count, missing-horsepower rows and the imputed median.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.summary)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(rows={}, features={}, threshold_mpg={})",
            self.inner.len(),
            self.inner.x.cols(),
            self.inner.threshold_mpg
        )
    }
}

#[pyfunction]
#[pyo3(signature = (path, threshold_mpg = 25.0))]
fn load_dataset(path: PathBuf, threshold_mpg: f64) -> PyResult<Dataset> {
    let (inner, summary) = eval::load_dataset(&path, threshold_mpg).map_err(err)?;
    Ok(Dataset { inner, summary })
}

/// Runs the requested sections and returns the full report as a dict.
/// `config` takes the same keys as the command-line TOML file.
#[pyfunction]
#[pyo3(signature = (dataset, config = None, sections = None))]
fn run_report<'py>(
    py: Python<'py>,
    dataset: &Dataset,
    config: Option<&Bound<'py, PyDict>>,
    sections: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let config: ExperimentConfig = match config {
        Some(c) => from_py(c.as_any())?,
        None => ExperimentConfig::default(),
    };
    config.validate().map_err(err)?;
    let sections = match sections {
        None => Sections::ALL,
        Some(names) => {
            let mut s = Sections {
                eda: false,
                regression: false,
                classification: false,
            };
            for n in names {
                match n.as_str() {
                    "eda" => s.eda = true,
                    "regression" => s.regression = true,
                    "classification" => s.classification = true,
                    other => return Err(PyValueError::new_err(format!("unknown section `{other}`"))),
                }
            }
            s
        }
    };
    let report = py
        .detach(|| eval::run_report(&dataset.inner, dataset.summary.clone(), &config, sections))
        .map_err(err)?;
    to_py(py, &report)
}

/// Default experiment configuration as a dict.
#[pyfunction]
fn default_config(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &ExperimentConfig::default())
}

/// Column-wise z-scoring with population standard deviation.
#[pyclass(module = "mpgw", frozen)]
struct Standardizer {
    inner: preprocess::Standardizer,
}

#[pymethods]
impl Standardizer {
    #[staticmethod]
    fn fit(x: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: preprocess::Standardizer::fit(&matrix(x)?).map_err(err)?,
        })
    }

    fn transform(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.apply(&matrix(x)?).map_err(err)?.to_rows())
    }

    fn inverse_transform(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        Ok(self.inner.invert(&matrix(x)?).map_err(err)?.to_rows())
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.means.clone()
    }

    #[getter]
    fn std(&self) -> Vec<f64> {
        self.inner.stds.clone()
    }
}

/// Returns `(train, test)` row indices.
#[pyfunction]
#[pyo3(signature = (n, ratio = 0.7, seed = 1))]
fn train_test_split(n: usize, ratio: f64, seed: u64) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let s = preprocess::train_test_split(n, ratio, seed).map_err(err)?;
    Ok((s.train, s.test))
}

/// Returns the `k` folds of a shuffled `0..n`.
#[pyfunction]
#[pyo3(signature = (n, k, seed = 1))]
fn kfold(n: usize, k: usize, seed: u64) -> PyResult<Vec<Vec<usize>>> {
    Ok(preprocess::kfold(n, k, seed).map_err(err)?.folds)
}

enum Fitted {
    Linear(LinearModel),
    Logistic(LogisticModel),
    Svm(SvmModel),
    Tree(DecisionTree),
    Forest(ForestModel),
}

/// A fitted model. `predict` returns regression values or 0/1 labels as
/// floats; `decision_function` is available for the margin-based classifiers.
#[pyclass(module = "mpgw", frozen)]
struct Model {
    inner: Fitted,
}

#[pymethods]
impl Model {
    fn predict(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let x = matrix(x)?;
        match &self.inner {
            Fitted::Linear(m) => m.predict_raw(&x),
            Fitted::Logistic(m) => m.predict(&x).map(|v| v.into_iter().map(f64::from).collect()),
            Fitted::Svm(m) => match m.task {
                svm::SvmTask::Classify => m.predict_labels(&x).map(|v| v.into_iter().map(f64::from).collect()),
                svm::SvmTask::Regress => m.predict(&x),
            },
            Fitted::Tree(m) => m.predict(&x),
            Fitted::Forest(m) => m.predict(&x),
        }
        .map_err(err)
    }

    fn decision_function(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let x = matrix(x)?;
        match &self.inner {
            Fitted::Logistic(m) => m.decision(&x),
            Fitted::Svm(m) => m.decision(&x),
            _ => return Err(PyValueError::new_err("model has no decision function")),
        }
        .map_err(err)
    }

    fn predict_proba(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        match &self.inner {
            Fitted::Logistic(m) => m.predict_proba(&matrix(x)?).map_err(err),
            _ => Err(PyValueError::new_err("only logistic regression gives probabilities")),
        }
    }

    /// The fitted parameters as a dict.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        match &self.inner {
            Fitted::Linear(m) => to_py(py, m),
            Fitted::Logistic(m) => to_py(py, m),
            Fitted::Svm(m) => to_py(py, m),
            Fitted::Tree(m) => to_py(py, m),
            Fitted::Forest(m) => to_py(py, m),
        }
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            Fitted::Linear(m) => format!("Model(linear {:?})", m.family),
            Fitted::Logistic(_) => "Model(logistic)".into(),
            Fitted::Svm(m) => format!("Model(svm {:?}, {} support vectors)", m.task, m.n_support()),
            Fitted::Tree(m) => format!("Model(tree, depth {})", m.root.depth()),
            Fitted::Forest(m) => format!("Model(forest, {} trees)", m.n_trees),
        }
    }
}

fn model(inner: Fitted) -> Model {
    Model { inner }
}

/// Fits a regressor from a spec dict such as `{"family": "ridge", "lambda": 1.0}`.
/// Families: ols, ridge, lasso, elastic_net, polynomial, svr, random_forest.
#[pyfunction]
fn fit_regressor(py: Python<'_>, spec: &Bound<'_, PyDict>, x: Vec<Vec<f64>>, y: Vec<f64>) -> PyResult<Model> {
    let spec: RegressorSpec = from_py(spec.as_any())?;
    let x = matrix(x)?;
    let fitted = py.detach(|| eval::fit_regressor(&spec, &x, &y)).map_err(err)?;
    Ok(model(match fitted {
        eval::Regressor::Linear(m) => Fitted::Linear(m),
        eval::Regressor::Svm(m) => Fitted::Svm(m),
        eval::Regressor::Forest(m) => Fitted::Forest(m),
    }))
}

/// Cross-validated R² for a regressor spec; returns `(fold_scores, mean)`.
#[pyfunction]
#[pyo3(signature = (spec, x, y, k = 10, seed = 1))]
fn cross_validate(
    py: Python<'_>,
    spec: &Bound<'_, PyDict>,
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    k: usize,
    seed: u64,
) -> PyResult<(Vec<f64>, f64)> {
    let spec: RegressorSpec = from_py(spec.as_any())?;
    let x = matrix(x)?;
    let r = py
        .detach(|| eval::cross_validate(&spec, &x, &y, k, seed))
        .map_err(err)?;
    Ok((r.fold_scores, r.mean))
}

#[pyfunction]
#[pyo3(signature = (x, labels, c = 1.0))]
fn fit_logistic(x: Vec<Vec<f64>>, labels: Vec<u8>, c: f64) -> PyResult<Model> {
    Ok(model(Fitted::Logistic(
        linear::fit_logistic(&matrix(x)?, &labels, c).map_err(err)?,
    )))
}

fn kernel(name: &str, gamma: Option<f64>, x: &Matrix) -> PyResult<Kernel> {
    match name {
        "linear" => Ok(Kernel::Linear),
        "rbf" => Ok(Kernel::Rbf {
            gamma: match gamma {
                Some(g) => g,
                None => svm::gamma_scale(x).map_err(err)?,
            },
        }),
        other => Err(PyValueError::new_err(format!("unknown kernel `{other}`"))),
    }
}

/// Soft-margin SVM classifier. An RBF kernel without `gamma` uses the
/// "scale" rule on `x`.
#[pyfunction]
#[pyo3(signature = (x, labels, c = 1.0, kernel = "linear", gamma = None))]
fn fit_svc(
    py: Python<'_>,
    x: Vec<Vec<f64>>,
    labels: Vec<u8>,
    c: f64,
    kernel: &str,
    gamma: Option<f64>,
) -> PyResult<Model> {
    let x = matrix(x)?;
    let k = self::kernel(kernel, gamma, &x)?;
    let m = py.detach(|| svm::fit_svc(&x, &labels, c, k)).map_err(err)?;
    Ok(model(Fitted::Svm(m)))
}

#[pyfunction]
#[pyo3(signature = (x, y, c = 1.0, epsilon = 0.1, kernel = "rbf", gamma = None))]
fn fit_svr(
    py: Python<'_>,
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    c: f64,
    epsilon: f64,
    kernel: &str,
    gamma: Option<f64>,
) -> PyResult<Model> {
    let x = matrix(x)?;
    let k = self::kernel(kernel, gamma, &x)?;
    let m = py.detach(|| svm::fit_svr(&x, &y, c, epsilon, k)).map_err(err)?;
    Ok(model(Fitted::Svm(m)))
}

fn task(name: &str) -> PyResult<TreeTask> {
    match name {
        "classify" => Ok(TreeTask::Classify),
        "regress" => Ok(TreeTask::Regress),
        other => Err(PyValueError::new_err(format!(
            "unknown task `{other}` (classify or regress)"
        ))),
    }
}

/// CART tree; for `task="classify"` the targets must be 0.0 or 1.0.
#[pyfunction]
#[pyo3(signature = (x, target, task = "regress", max_depth = None, min_samples_leaf = 1, max_features = None, seed = 0))]
fn fit_tree(
    x: Vec<Vec<f64>>,
    target: Vec<f64>,
    task: &str,
    max_depth: Option<usize>,
    min_samples_leaf: usize,
    max_features: Option<usize>,
    seed: u64,
) -> PyResult<Model> {
    let params = TreeParams {
        max_depth,
        min_samples_leaf,
        max_features,
        seed,
    };
    let m = tree::fit_cart(&matrix(x)?, &target, self::task(task)?, params).map_err(err)?;
    Ok(model(Fitted::Tree(m)))
}

#[pyfunction]
#[pyo3(signature = (x, target, task = "regress", n_trees = 100, max_features = None, min_samples_leaf = 1, max_depth = None, seed = 1))]
#[allow(clippy::too_many_arguments)]
fn fit_random_forest(
    py: Python<'_>,
    x: Vec<Vec<f64>>,
    target: Vec<f64>,
    task: &str,
    n_trees: usize,
    max_features: Option<usize>,
    min_samples_leaf: usize,
    max_depth: Option<usize>,
    seed: u64,
) -> PyResult<Model> {
    let params = ForestParams {
        n_trees,
        max_features,
        min_samples_leaf,
        max_depth,
        bootstrap: true,
        seed,
    };
    let x = matrix(x)?;
    let task = self::task(task)?;
    let m = py
        .detach(|| tree::fit_random_forest(&x, &target, task, params))
        .map_err(err)?;
    Ok(model(Fitted::Forest(m)))
}

#[pyfunction]
fn r2_score(y_true: Vec<f64>, y_pred: Vec<f64>) -> PyResult<f64> {
    metrics::r2_score(&y_true, &y_pred).map_err(err)
}

/// MAE, MSE, RMSE, R² and adjusted R² for `p` predictors.
#[pyfunction]
fn regression_metrics(py: Python<'_>, y_true: Vec<f64>, y_pred: Vec<f64>, p: usize) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &metrics::regression_metrics(&y_true, &y_pred, p).map_err(err)?)
}

/// Confusion counts plus per-class precision, recall and F1.
#[pyfunction]
fn classification_report(py: Python<'_>, labels_true: Vec<u8>, labels_pred: Vec<u8>) -> PyResult<Bound<'_, PyAny>> {
    let cm = metrics::confusion_matrix(&labels_true, &labels_pred).map_err(err)?;
    to_py(py, &metrics::classification_report(&cm).map_err(err)?)
}

type RocParts = (Vec<f64>, Vec<f64>, Vec<f64>, f64);

/// Returns `(fpr, tpr, thresholds, auc)`.
#[pyfunction]
fn roc_curve(scores: Vec<f64>, labels: Vec<u8>) -> PyResult<RocParts> {
    let r = metrics::roc_curve(&scores, &labels).map_err(err)?;
    Ok((r.fpr, r.tpr, r.thresholds, r.auc))
}

#[pyfunction]
fn roc_auc(scores: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    metrics::roc_auc(&scores, &labels).map_err(err)
}

#[pyfunction]
fn pearson(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    metrics::pearson(&a, &b).map_err(err)
}

/// Returns `(edges, counts)` for equal-width bins.
#[pyfunction]
#[pyo3(signature = (values, bins = 20))]
fn histogram(values: Vec<f64>, bins: usize) -> PyResult<(Vec<f64>, Vec<usize>)> {
    let h = metrics::histogram(&values, bins).map_err(err)?;
    Ok((h.edges, h.counts))
}

#[pymodule]
fn mpgw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DataError", m.py().get_type::<DataError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<Dataset>()?;
    m.add_class::<Standardizer>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(train_test_split, m)?)?;
    m.add_function(wrap_pyfunction!(kfold, m)?)?;
    m.add_function(wrap_pyfunction!(fit_regressor, m)?)?;
    m.add_function(wrap_pyfunction!(cross_validate, m)?)?;
    m.add_function(wrap_pyfunction!(fit_logistic, m)?)?;
    m.add_function(wrap_pyfunction!(fit_svc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_svr, m)?)?;
    m.add_function(wrap_pyfunction!(fit_tree, m)?)?;
    m.add_function(wrap_pyfunction!(fit_random_forest, m)?)?;
    m.add_function(wrap_pyfunction!(r2_score, m)?)?;
    m.add_function(wrap_pyfunction!(regression_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(classification_report, m)?)?;
    m.add_function(wrap_pyfunction!(roc_curve, m)?)?;
    m.add_function(wrap_pyfunction!(roc_auc, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(histogram, m)?)?;
    Ok(())
}
