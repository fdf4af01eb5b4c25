//! Evaluation: regression errors, confusion-based classification scores,
//! ROC/AUC, Pearson correlation, and histograms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub n: usize,
    pub p: usize,
}

pub fn r2_score(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    if y_true.len() < 2 {
        return Err(Error::InvalidParameter("R² needs at least 2 values".into()));
    }
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let sst: f64 = y_true.iter().map(|y| (y - mean).powi(2)).sum();
    if sst == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sse: f64 = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).powi(2)).sum();
    Ok(1.0 - sse / sst)
}

/// `1 − (1 − R²)(n − 1)/(n − p − 1)`.
pub fn adjusted_r2(r2: f64, n: usize, p: usize) -> Result<f64> {
    if n <= p + 1 {
        return Err(Error::AdjustedR2Undefined { n, p });
    }
    Ok(1.0 - (1.0 - r2) * (n as f64 - 1.0) / (n - p - 1) as f64)
}

pub fn regression_metrics(y_true: &[f64], y_pred: &[f64], p: usize) -> Result<RegressionMetrics> {
    let r2 = r2_score(y_true, y_pred)?;
    let n = y_true.len();
    let nf = n as f64;
    let mae = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).abs()).sum::<f64>() / nf;
    let mse = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).powi(2)).sum::<f64>() / nf;
    Ok(RegressionMetrics {
        mae,
        mse,
        rmse: mse.sqrt(),
        r2,
        adj_r2: adjusted_r2(r2, n, p)?,
        n,
        p,
    })
}

/// Binary confusion counts with class 1 as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion_matrix(labels_true: &[u8], labels_pred: &[u8]) -> Result<ConfusionMatrix> {
    if labels_true.len() != labels_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: labels_true.len(),
            found: labels_pred.len(),
        });
    }
    if labels_true.is_empty() {
        return Err(Error::EmptyInput("no labels to compare".into()));
    }
    let mut cm = ConfusionMatrix {
        tp: 0,
        fp: 0,
        tn: 0,
        fn_: 0,
    };
    for (&t, &p) in labels_true.iter().zip(labels_pred) {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 1) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (1, 0) => cm.fn_ += 1,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "labels must be 0 or 1, got ({t}, {p})"
                )))
            }
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of true instances of the class.
    pub support: usize,
    /// Set when some denominator was zero and the metric was reported as 0.
    pub zero_division: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub class0: ClassMetrics,
    pub class1: ClassMetrics,
    pub confusion: ConfusionMatrix,
}

fn class_metrics(correct: usize, predicted: usize, actual: usize) -> ClassMetrics {
    let mut zero_division = false;
    let mut ratio = |num: usize, den: usize| {
        if den == 0 {
            zero_division = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(correct, predicted);
    let recall = ratio(correct, actual);
    let f1 = if precision + recall == 0.0 {
        zero_division = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: actual,
        zero_division,
    }
}

pub fn classification_report(cm: &ConfusionMatrix) -> Result<ClassificationReport> {
    let n = cm.total();
    if n == 0 {
        return Err(Error::EmptyInput("empty confusion matrix".into()));
    }
    Ok(ClassificationReport {
        accuracy: (cm.tp + cm.tn) as f64 / n as f64,
        class0: class_metrics(cm.tn, cm.tn + cm.fn_, cm.tn + cm.fp),
        class1: class_metrics(cm.tp, cm.tp + cm.fp, cm.tp + cm.fn_),
        confusion: *cm,
    })
}

/// ROC curve; `fpr[0] = tpr[0] = 0` and the curve ends at `(1, 1)`.
///
/// `thresholds[k]` is the score cut producing point `k + 1` (predict positive
/// when `score >= threshold`), so it is one shorter than `fpr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub fpr: Vec<f64>,
    pub tpr: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub auc: f64,
}

pub fn roc_curve(scores: &[f64], labels: &[u8]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidParameter("NaN score".into()));
    }
    let pos = labels.iter().filter(|&&l| l == 1).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let (mut tp, mut fp) = (0u64, 0u64);
    let mut fpr = vec![0.0];
    let mut tpr = vec![0.0];
    let mut thresholds = Vec::new();
    // twice the area in count units, kept integral so AUC is a single division
    let mut area2: u128 = 0;
    let mut k = 0;
    while k < order.len() {
        let s = scores[order[k]];
        let (tp0, fp0) = (tp, fp);
        while k < order.len() && scores[order[k]] == s {
            if labels[order[k]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        area2 += u128::from(fp - fp0) * u128::from(tp + tp0);
        fpr.push(fp as f64 / neg as f64);
        tpr.push(tp as f64 / pos as f64);
        thresholds.push(s);
    }
    Ok(RocCurve {
        fpr,
        tpr,
        thresholds,
        auc: area2 as f64 / (2 * u128::from(pos) * u128::from(neg)) as f64,
    })
}

pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    roc_curve(scores, labels).map(|r| r.auc)
}

pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ConstantColumn {
            column: "correlation input".into(),
        });
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i][j])
    }
}

/// Pearson correlations between every pair of columns.
pub fn correlation_matrix(m: &Matrix, labels: &[String]) -> Result<CorrelationMatrix> {
    if labels.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: labels.len(),
        });
    }
    let cols: Vec<Vec<f64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let d = cols.len();
    let mut values = vec![vec![0.0; d]; d];
    for i in 0..d {
        values[i][i] = 1.0;
        for j in i + 1..d {
            let r = pearson(&cols[i], &cols[j]).map_err(|e| match e {
                Error::ConstantColumn { .. } => {
                    let which = if cols[i].iter().all(|v| *v == cols[i][0]) { i } else { j };
                    Error::ConstantColumn {
                        column: labels[which].clone(),
                    }
                }
                other => other,
            })?;
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: labels.to_vec(),
        values,
    })
}

/// Correlations over `mpg` plus the seven features of the full dataset.
pub fn pearson_matrix(dataset: &crate::ingest::Dataset) -> Result<CorrelationMatrix> {
    let (m, names) = dataset.with_target();
    correlation_matrix(&m, &names)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Equal-width bins over `[min, max]`, last bin closed on the right. A
/// constant series is binned over `[v − 0.5, v + 0.5]`.
pub fn histogram(series: &[f64], bins: usize) -> Result<Histogram> {
    if series.is_empty() {
        return Err(Error::EmptyInput("histogram of an empty series".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite value in histogram input".into()));
    }
    let mut lo = series.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let span = hi - lo;
    let edges = (0..=bins).map(|k| lo + span * k as f64 / bins as f64).collect();
    let mut counts = vec![0; bins];
    for &v in series {
        let k = (((v - lo) / span) * bins as f64).floor() as usize;
        counts[k.min(bins - 1)] += 1;
    }
    Ok(Histogram { edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use proptest::prelude::*;

    fn brute_force_auc(scores: &[f64], labels: &[u8]) -> f64 {
        let (mut num2, mut pairs) = (0u64, 0u64);
        for (i, &li) in labels.iter().enumerate() {
            for (j, &lj) in labels.iter().enumerate() {
                if li == 1 && lj == 0 {
                    pairs += 1;
                    if scores[i] > scores[j] {
                        num2 += 2;
                    } else if scores[i] == scores[j] {
                        num2 += 1;
                    }
                }
            }
        }
        num2 as f64 / (2 * pairs) as f64
    }

    #[test]
    fn perfect_regression() {
        let y = [1.0, 2.0, 5.0, 3.0];
        let m = regression_metrics(&y, &y, 1).unwrap();
        assert_eq!((m.mae, m.mse, m.r2, m.adj_r2), (0.0, 0.0, 1.0, 1.0));
    }

    #[test]
    fn mean_prediction_by_hand() {
        let m = regression_metrics(&[1.0, 2.0, 3.0], &[2.0; 3], 0).unwrap();
        assert!((m.mae - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.mse - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.r2, 0.0);
    }

    #[test]
    fn adjusted_r2_reference_arithmetic() {
        let a = adjusted_r2(0.847, 120, 7).unwrap();
        assert!((a - 0.8374).abs() < 5e-4, "{a}");
    }

    #[test]
    fn regression_errors() {
        assert_eq!(
            regression_metrics(&[2.0, 2.0], &[1.0, 3.0], 0),
            Err(Error::ZeroVariance)
        );
        assert!(matches!(
            regression_metrics(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 2),
            Err(Error::AdjustedR2Undefined { n: 3, p: 2 })
        ));
    }

    #[test]
    fn all_correct_classification() {
        let y = [0, 1, 1, 0, 1];
        let r = classification_report(&confusion_matrix(&y, &y).unwrap()).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!((r.class0.f1, r.class1.f1), (1.0, 1.0));
    }

    #[test]
    fn one_false_positive() {
        let r = classification_report(&confusion_matrix(&[0, 0, 1, 1], &[0, 1, 1, 1]).unwrap()).unwrap();
        assert!((r.class1.precision - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.class1.recall, 1.0);
        assert!((r.class1.f1 - 0.8).abs() < 1e-15);
        assert_eq!(r.class0.precision, 1.0);
        assert_eq!(r.class0.recall, 0.5);
    }

    #[test]
    fn no_predicted_positives_flags_zero_division() {
        let r = classification_report(&confusion_matrix(&[0, 1, 1], &[0, 0, 0]).unwrap()).unwrap();
        assert_eq!(r.class1.precision, 0.0);
        assert!(r.class1.zero_division);
        assert!(!r.class0.zero_division);
    }

    #[test]
    fn empty_labels_rejected() {
        assert!(confusion_matrix(&[], &[]).is_err());
    }

    #[test]
    fn perfect_ranking_auc() {
        let r = roc_curve(&[0.9, 0.8, 0.3, 0.1], &[1, 1, 0, 0]).unwrap();
        assert_eq!(r.auc, 1.0);
        assert_eq!((r.fpr[0], r.tpr[0]), (0.0, 0.0));
        assert_eq!((*r.fpr.last().unwrap(), *r.tpr.last().unwrap()), (1.0, 1.0));
    }

    #[test]
    fn three_of_four_concordant() {
        assert_eq!(roc_auc(&[0.9, 0.6, 0.4, 0.1], &[1, 0, 1, 0]).unwrap(), 0.75);
    }

    #[test]
    fn tied_scores_grouped() {
        let r = roc_curve(&[0.5, 0.5, 0.5, 0.5], &[1, 0, 1, 0]).unwrap();
        assert_eq!(r.fpr, vec![0.0, 1.0]);
        assert_eq!(r.auc, 0.5);
    }

    #[test]
    fn one_class_roc_rejected() {
        assert_eq!(roc_curve(&[0.1, 0.2], &[1, 1]), Err(Error::SingleClass));
    }

    #[test]
    fn auc_matches_pair_counting() {
        let mut rng = SeededRng::new(99);
        for _ in 0..100 {
            let n = 2 + rng.below(29) as usize;
            let labels: Vec<u8> = (0..n).map(|_| rng.below(2) as u8).collect();
            if !labels.contains(&0) || !labels.contains(&1) {
                continue;
            }
            let scores: Vec<f64> = (0..n).map(|_| rng.below(6) as f64 / 5.0).collect();
            let auc = roc_auc(&scores, &labels).unwrap();
            assert!((auc - brute_force_auc(&scores, &labels)).abs() <= 1e-12);
        }
    }

    #[test]
    fn self_and_negated_correlation() {
        let x = [1.0, 4.0, 2.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_column_named() {
        let m = Matrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 3.0]]).unwrap();
        let labels = vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            correlation_matrix(&m, &labels),
            Err(Error::ConstantColumn { column: "b".into() })
        );
    }

    #[test]
    fn histogram_by_hand() {
        let h = histogram(&[1.0, 1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(h.counts, vec![2, 1, 1]);
        assert_eq!(h.edges.first(), Some(&1.0));
        assert_eq!(h.edges.last(), Some(&3.0));
    }

    #[test]
    fn constant_series_single_bin() {
        let h = histogram(&[4.0; 7], 5).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.counts.iter().sum::<usize>(), 7);
    }

    #[test]
    fn histogram_errors() {
        assert!(histogram(&[], 3).is_err());
        assert!(histogram(&[1.0], 0).is_err());
    }

    #[test]
    fn mean_predictor_has_zero_r2() {
        let y = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let mean = y.iter().sum::<f64>() / 8.0;
        assert_eq!(r2_score(&y, &[mean; 8]).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn histogram_counts_sum_to_n(series in prop::collection::vec(-1e6f64..1e6, 1..200), bins in 1usize..50) {
            let h = histogram(&series, bins).unwrap();
            prop_assert_eq!(h.counts.iter().sum::<usize>(), series.len());
            prop_assert_eq!(h.edges.len(), bins + 1);
        }

        #[test]
        fn auc_invariant_under_monotone_transform(
            pairs in prop::collection::vec((-5i32..5, 0u8..2), 2..40)
        ) {
            let scores: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
            let labels: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            prop_assume!(labels.contains(&0) && labels.contains(&1));
            let a = roc_curve(&scores, &labels).unwrap();
            let t: Vec<f64> = scores.iter().map(|s| (0.7 * s).exp() * 3.0 - 1.0).collect();
            let b = roc_curve(&t, &labels).unwrap();
            prop_assert_eq!(a.auc, b.auc);
            prop_assert_eq!(a.fpr, b.fpr);
            prop_assert_eq!(a.tpr, b.tpr);
        }

        #[test]
        fn accuracy_is_prevalence_weighted_recall(
            pairs in prop::collection::vec((0u8..2, 0u8..2), 1..60)
        ) {
            let t: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            let p: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            let r = classification_report(&confusion_matrix(&t, &p).unwrap()).unwrap();
            let n = t.len() as f64;
            let weighted = r.class0.recall * r.class0.support as f64 / n + r.class1.recall * r.class1.support as f64 / n;
            prop_assert!((weighted - r.accuracy).abs() < 1e-12);
        }

        #[test]
        fn pearson_affine_invariance(
            rows in prop::collection::vec(prop::collection::vec(-100f64..100.0, 3), 4..30),
            scale in 0.01f64..100.0, shift in -50f64..50.0
        ) {
            let m = Matrix::from_rows(&rows).unwrap();
            let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let Ok(base) = correlation_matrix(&m, &labels) else { return Ok(()) };
            let mut m2 = m.clone();
            for i in 0..m2.rows() { m2[(i, 1)] = m2[(i, 1)] * scale + shift; }
            let moved = correlation_matrix(&m2, &labels).unwrap();
            for i in 0..3 { for j in 0..3 {
                prop_assert!((base.values[i][j] - moved.values[i][j]).abs() < 1e-9);
                prop_assert_eq!(base.values[i][j], base.values[j][i]);
            }}
        }
    }
}
