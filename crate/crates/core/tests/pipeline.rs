use std::path::{Path, PathBuf};

use mpgw_core::eval::{
    load_dataset, prepare_split, run_classification_grid, run_eda, run_regression_suite, ExperimentConfig,
};
use mpgw_core::ingest::{REFERENCE_ROWS, REFERENCE_SHA256};

fn data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/auto-mpg.data")
}

#[test]
fn reference_file_summary() {
    let (ds, summary) = load_dataset(&data_path(), 25.0).unwrap();
    assert_eq!(summary.sha256, REFERENCE_SHA256);
    assert!(summary.matches_reference);
    assert_eq!(ds.len(), REFERENCE_ROWS);
    assert_eq!(summary.missing_horsepower_rows.len(), 6);
    assert_eq!(summary.horsepower_median, 93.5);
    assert_eq!(summary.n_positive, ds.label.iter().filter(|&&l| l == 1).count());
}

#[test]
fn regression_suite_shape() {
    let (ds, _) = load_dataset(&data_path(), 25.0).unwrap();
    let r = run_regression_suite(&ds, &ExperimentConfig::default()).unwrap();
    assert_eq!(r.rows.len(), 7);
    assert!(r.rows.iter().all(|row| row.error.is_none()));
    let r2: Vec<f64> = r.rows.iter().map(|row| row.metrics.as_ref().unwrap().r2).collect();
    assert!(r2.windows(2).all(|w| w[0] >= w[1]));
    let with_cv: Vec<&str> = r
        .rows
        .iter()
        .filter(|row| row.cv_mean_r2.is_some())
        .map(|row| row.model.as_str())
        .collect();
    assert_eq!(with_cv.len(), 4);
    for name in [
        "Ridge Regression",
        "Linear Regression",
        "Elastic Net Regression",
        "Lasso Regression",
    ] {
        assert!(with_cv.contains(&name), "{name}");
    }
    let poly = r.rows.iter().find(|row| row.model == "Polynomial Regression").unwrap();
    assert_eq!(poly.metrics.as_ref().unwrap().p, 35);
    assert_eq!((r.n_train, r.n_test), (279, 119));
    let d = r.diagnostics.as_ref().unwrap();
    assert_eq!(d.residual_histogram.counts.iter().sum::<usize>(), r.n_test);
    assert_eq!(r.r2_chart.len(), 7);
}

#[test]
fn classification_grid_shape() {
    let (ds, _) = load_dataset(&data_path(), 25.0).unwrap();
    let g = run_classification_grid(&ds, &ExperimentConfig::default()).unwrap();
    assert_eq!(g.rows.len(), 10);
    assert!(g.rows.iter().all(|row| row.report.is_some()));
    assert_eq!(g.roc.len(), 4);
    for s in &g.roc {
        assert_eq!((s.curve.fpr[0], s.curve.tpr[0]), (0.0, 0.0));
        assert_eq!((*s.curve.fpr.last().unwrap(), *s.curve.tpr.last().unwrap()), (1.0, 1.0));
    }
    assert_eq!(g.class0.len(), 5);
    assert_eq!(g.class1.len(), 5);
    assert!(g.class0.windows(2).all(|w| w[0].precision >= w[1].precision));
    let no_kernel = g.class0.iter().find(|r| r.model == "SVM No Kernel").unwrap();
    assert_eq!(no_kernel.source, "SVM (Linear Kernel, C=1.0)");
}

#[test]
fn eda_correlation_anchor() {
    let (ds, _) = load_dataset(&data_path(), 25.0).unwrap();
    let e = run_eda(&ds, &ExperimentConfig::default()).unwrap();
    assert!((e.correlation.get("displacement", "weight").unwrap() - 0.933).abs() <= 0.005);
    assert_eq!(e.histograms.len(), 8);
    assert_eq!(e.pair_rows.len(), 398);
    assert_eq!(e.pair_columns.last().map(String::as_str), Some("label"));
}

#[test]
fn test_rows_do_not_leak_into_training_artifacts() {
    let (mut ds, _) = load_dataset(&data_path(), 25.0).unwrap();
    let config = ExperimentConfig::default();
    let before = run_regression_suite(&ds, &config).unwrap();
    let split = prepare_split(&ds, &config).unwrap().split;
    for (k, &i) in split.test.iter().enumerate() {
        for j in 0..ds.x.cols() {
            ds.x[(i, j)] = 1000.0 + (k * 7 + j) as f64;
        }
        ds.y[i] = -50.0 - k as f64;
    }
    let after = run_regression_suite(&ds, &config).unwrap();
    assert_eq!(before.x_scaler, after.x_scaler);
    assert_eq!(before.y_scaler, after.y_scaler);
    assert_eq!(before.selections, after.selections);
}
