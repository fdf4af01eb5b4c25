//! CART decision trees and bagged random forests.
//!
//! Splits are axis-aligned at midpoints between consecutive distinct feature
//! values; a value equal to the threshold goes left. Classification uses Gini
//! impurity, regression uses variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::{derive_seeds, SeededRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeTask {
    Classify,
    Regress,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        /// Mean target (regression) or class index (classification).
        prediction: f64,
        n_samples: usize,
        impurity: f64,
    },
}

impl TreeNode {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { prediction, .. } => return *prediction,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    fn max_feature(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature, left, right, ..
            } => Some(
                [Some(*feature), left.max_feature(), right.max_feature()]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(*feature),
            ),
        }
    }
}

/// Fitted tree together with the feature count it was trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_features: usize,
    pub task: TreeTask,
}

impl DecisionTree {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: x.cols(),
            });
        }
        debug_assert!(self.root.max_feature().is_none_or(|f| f < self.n_features));
        Ok((0..x.rows()).map(|i| self.root.predict_row(x.row(i))).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features examined per split; `None` means all of them.
    pub max_features: Option<usize>,
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
            seed: 0,
        }
    }
}

/// `1 − Σ pₖ²` over class counts.
pub fn gini(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / nf).powi(2)).sum::<f64>()
}

struct Builder<'a> {
    x: &'a Matrix,
    target: &'a [f64],
    task: TreeTask,
    n_classes: usize,
    params: TreeParams,
    rng: SeededRng,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
    /// Number of samples going left once sorted by `feature`.
    n_left: usize,
}

impl Builder<'_> {
    fn class_counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.target[i] as usize] += 1;
        }
        c
    }

    fn leaf(&self, idx: &[usize]) -> TreeNode {
        let pure = idx.iter().all(|&i| self.target[i] == self.target[idx[0]]);
        let (prediction, impurity) = match self.task {
            TreeTask::Classify => {
                let counts = self.class_counts(idx);
                // first maximum: ties go to the lower class index
                let mut best = 0;
                for (k, &c) in counts.iter().enumerate() {
                    if c > counts[best] {
                        best = k;
                    }
                }
                (best as f64, if pure { 0.0 } else { gini(&counts) })
            }
            TreeTask::Regress => {
                if pure {
                    // the summed mean of equal values can be off by an ulp
                    (self.target[idx[0]], 0.0)
                } else {
                    let n = idx.len() as f64;
                    let mean = idx.iter().map(|&i| self.target[i]).sum::<f64>() / n;
                    (
                        mean,
                        idx.iter().map(|&i| (self.target[i] - mean).powi(2)).sum::<f64>() / n,
                    )
                }
            }
        };
        TreeNode::Leaf {
            prediction,
            n_samples: idx.len(),
            impurity,
        }
    }

    fn node_impurity(&self, idx: &[usize]) -> f64 {
        match self.task {
            TreeTask::Classify => gini(&self.class_counts(idx)),
            TreeTask::Regress => {
                let n = idx.len() as f64;
                let mean = idx.iter().map(|&i| self.target[i]).sum::<f64>() / n;
                idx.iter().map(|&i| (self.target[i] - mean).powi(2)).sum::<f64>() / n
            }
        }
    }

    /// Best split on one feature; `idx` must already be sorted by it.
    #[allow(clippy::needless_range_loop)]
    fn scan_feature(&self, feature: usize, idx: &[usize], parent: f64) -> Option<BestSplit> {
        let n = idx.len();
        let min_leaf = self.params.min_samples_leaf;
        let nf = n as f64;
        let mut best: Option<BestSplit> = None;
        let value = |k: usize| self.x[(idx[k], feature)];
        match self.task {
            TreeTask::Classify => {
                let total = self.class_counts(idx);
                let mut left = vec![0usize; self.n_classes];
                for k in 0..n - 1 {
                    left[self.target[idx[k]] as usize] += 1;
                    let nl = k + 1;
                    if nl < min_leaf || n - nl < min_leaf || value(k) == value(k + 1) {
                        continue;
                    }
                    let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
                    let child = (nl as f64 * gini(&left) + (n - nl) as f64 * gini(&right)) / nf;
                    let decrease = parent - child;
                    if best.as_ref().is_none_or(|b| decrease > b.decrease) {
                        best = Some(BestSplit {
                            feature,
                            threshold: midpoint(value(k), value(k + 1)),
                            decrease,
                            n_left: nl,
                        });
                    }
                }
            }
            TreeTask::Regress => {
                let mean = idx.iter().map(|&i| self.target[i]).sum::<f64>() / nf;
                // centered sums keep the SSE arithmetic well conditioned
                let total_sum: f64 = idx.iter().map(|&i| self.target[i] - mean).sum();
                let total_sq: f64 = idx.iter().map(|&i| (self.target[i] - mean).powi(2)).sum();
                let (mut ls, mut lq) = (0.0, 0.0);
                for k in 0..n - 1 {
                    let t = self.target[idx[k]] - mean;
                    ls += t;
                    lq += t * t;
                    let nl = k + 1;
                    if nl < min_leaf || n - nl < min_leaf || value(k) == value(k + 1) {
                        continue;
                    }
                    let nr = (n - nl) as f64;
                    let (rs, rq) = (total_sum - ls, total_sq - lq);
                    let sse_l = (lq - ls * ls / nl as f64).max(0.0);
                    let sse_r = (rq - rs * rs / nr).max(0.0);
                    let decrease = parent - (sse_l + sse_r) / nf;
                    if best.as_ref().is_none_or(|b| decrease > b.decrease) {
                        best = Some(BestSplit {
                            feature,
                            threshold: midpoint(value(k), value(k + 1)),
                            decrease,
                            n_left: nl,
                        });
                    }
                }
            }
        }
        best
    }

    fn build(&mut self, idx: &mut [usize], depth: usize) -> TreeNode {
        let n = idx.len();
        let pure = idx.iter().all(|&i| self.target[i] == self.target[idx[0]]);
        let depth_reached = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_reached || n < 2 * self.params.min_samples_leaf.max(1) {
            return self.leaf(idx);
        }
        let parent = self.node_impurity(idx);
        let d = self.x.cols();
        let wanted = self.params.max_features.unwrap_or(d).min(d);
        let order: Vec<usize> = if wanted < d {
            self.rng.permutation(d)
        } else {
            (0..d).collect()
        };
        let min_gain = 1e-12 * parent.max(f64::MIN_POSITIVE);
        let mut best: Option<BestSplit> = None;
        for (visited, &f) in order.iter().enumerate() {
            // past the quota, keep looking only until some valid split exists
            if visited >= wanted && best.is_some() {
                break;
            }
            idx.sort_by(|&a, &b| self.x[(a, f)].total_cmp(&self.x[(b, f)]));
            if let Some(s) = self.scan_feature(f, idx, parent) {
                if s.decrease > min_gain && best.as_ref().is_none_or(|b| s.decrease > b.decrease) {
                    best = Some(s);
                }
            }
        }
        let Some(split) = best else {
            return self.leaf(idx);
        };
        let f = split.feature;
        idx.sort_by(|&a, &b| self.x[(a, f)].total_cmp(&self.x[(b, f)]));
        let (left_idx, right_idx) = idx.split_at_mut(split.n_left);
        let left = self.build(left_idx, depth + 1);
        let right = self.build(right_idx, depth + 1);
        TreeNode::Split {
            feature: f,
            threshold: split.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    // adjacent doubles: the midpoint rounds onto `hi`, which would send it left
    if mid >= hi {
        lo
    } else {
        mid
    }
}

fn validate(x: &Matrix, target: &[f64], task: TreeTask, params: &TreeParams) -> Result<usize> {
    if x.rows() == 0 {
        return Err(Error::EmptyInput("no training rows".into()));
    }
    if x.rows() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: target.len(),
        });
    }
    if params.min_samples_leaf == 0 {
        return Err(Error::InvalidParameter("min_samples_leaf must be >= 1".into()));
    }
    if params.max_features == Some(0) {
        return Err(Error::InvalidParameter("max_features must be >= 1".into()));
    }
    match task {
        TreeTask::Classify => {
            if target.iter().any(|&t| t < 0.0 || t.fract() != 0.0) {
                return Err(Error::InvalidParameter(
                    "classification targets must be non-negative class indices".into(),
                ));
            }
            Ok(target.iter().fold(0.0f64, |m, &t| m.max(t)) as usize + 1)
        }
        TreeTask::Regress => {
            if target.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidParameter("non-finite regression target".into()));
            }
            Ok(0)
        }
    }
}

fn fit_with_rng(
    x: &Matrix,
    target: &[f64],
    rows: &mut [usize],
    task: TreeTask,
    n_classes: usize,
    params: TreeParams,
    rng: SeededRng,
) -> DecisionTree {
    let mut b = Builder {
        x,
        target,
        task,
        n_classes,
        params,
        rng,
    };
    DecisionTree {
        root: b.build(rows, 0),
        n_features: x.cols(),
        task,
    }
}

/// Grows one CART tree. Classification targets are class indices `0, 1, …`
/// stored as `f64`.
pub fn fit_cart(x: &Matrix, target: &[f64], task: TreeTask, params: TreeParams) -> Result<DecisionTree> {
    let n_classes = validate(x, target, task, &params)?;
    let mut rows: Vec<usize> = (0..x.rows()).collect();
    Ok(fit_with_rng(
        x,
        target,
        &mut rows,
        task,
        n_classes,
        params,
        SeededRng::new(params.seed),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` picks ⌈d/3⌉ for regression and ⌈√d⌉ for classification.
    pub max_features: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_features: None,
            min_samples_leaf: 1,
            max_depth: None,
            bootstrap: true,
            seed: 1,
        }
    }
}

pub fn default_max_features(task: TreeTask, d: usize) -> usize {
    match task {
        TreeTask::Regress => d.div_ceil(3),
        TreeTask::Classify => (d as f64).sqrt().ceil() as usize,
    }
    .max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub per_tree_seeds: Vec<u64>,
    pub max_features: usize,
    pub n_trees: usize,
    pub task: TreeTask,
    pub bootstrap: bool,
}

/// Bagged CART ensemble. Tree `t` draws its bootstrap sample and its
/// per-split feature subsets from one generator seeded with
/// `per_tree_seeds[t]`, itself derived from the master seed by splitmix64.
pub fn fit_random_forest(x: &Matrix, target: &[f64], task: TreeTask, params: ForestParams) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be >= 1".into()));
    }
    if x.rows() < 2 {
        return Err(Error::InvalidParameter("random forest needs n >= 2".into()));
    }
    let d = x.cols();
    let max_features = params.max_features.unwrap_or_else(|| default_max_features(task, d));
    if max_features == 0 || max_features > d {
        return Err(Error::InvalidParameter(format!(
            "max_features must lie in 1..={d}, got {max_features}"
        )));
    }
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf,
        max_features: Some(max_features),
        seed: 0,
    };
    let n_classes = validate(x, target, task, &tree_params)?;
    let seeds = derive_seeds(params.seed, params.n_trees);
    let n = x.rows();
    let trees = seeds
        .iter()
        .map(|&s| {
            let mut rng = SeededRng::new(s);
            let mut rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.below(n as u64) as usize).collect()
            } else {
                (0..n).collect()
            };
            fit_with_rng(
                x,
                target,
                &mut rows,
                task,
                n_classes,
                TreeParams { seed: s, ..tree_params },
                rng,
            )
        })
        .collect();
    Ok(ForestModel {
        trees,
        per_tree_seeds: seeds,
        max_features,
        n_trees: params.n_trees,
        task,
        bootstrap: params.bootstrap,
    })
}

impl ForestModel {
    /// Per-tree predictions, one vector per tree.
    pub fn tree_predictions(&self, x: &Matrix) -> Result<Vec<Vec<f64>>> {
        self.trees.iter().map(|t| t.predict(x)).collect()
    }

    /// Mean over trees (regression) or majority vote with ties to the lower
    /// class (classification).
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        let per_tree = self.tree_predictions(x)?;
        let rows = x.rows();
        Ok(match self.task {
            TreeTask::Regress => (0..rows)
                .map(|i| per_tree.iter().map(|p| p[i]).sum::<f64>() / per_tree.len() as f64)
                .collect(),
            TreeTask::Classify => (0..rows)
                .map(|i| {
                    let mut votes: Vec<usize> = Vec::new();
                    for p in &per_tree {
                        let k = p[i] as usize;
                        if votes.len() <= k {
                            votes.resize(k + 1, 0);
                        }
                        votes[k] += 1;
                    }
                    let mut best = 0;
                    for (k, &v) in votes.iter().enumerate() {
                        if v > votes[best] {
                            best = k;
                        }
                    }
                    best as f64
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(values: &[f64]) -> Matrix {
        Matrix::column_vector(values).unwrap()
    }

    #[test]
    fn separable_pair() {
        let t = fit_cart(
            &col(&[0.0, 1.0]),
            &[0.0, 1.0],
            TreeTask::Classify,
            TreeParams::default(),
        )
        .unwrap();
        assert_eq!(t.root.n_leaves(), 2);
        assert_eq!(t.predict(&col(&[0.0, 1.0])).unwrap(), vec![0.0, 1.0]);
        match &t.root {
            TreeNode::Split { threshold, .. } => assert_eq!(*threshold, 0.5),
            _ => panic!("expected a split"),
        }
    }

    #[test]
    fn duplicated_rows_predict_exact_target() {
        let t = fit_cart(
            &col(&[1.0, 1.0, 1.0, 2.0]),
            &[0.7, 0.7, 0.7, 3.0],
            TreeTask::Regress,
            TreeParams::default(),
        )
        .unwrap();
        assert_eq!(t.predict(&col(&[1.0, 2.0])).unwrap(), vec![0.7, 3.0]);
    }

    #[test]
    fn gini_of_balanced_pair() {
        assert_eq!(gini(&[2, 2]), 0.5);
        assert_eq!(gini(&[4, 0]), 0.0);
    }

    #[test]
    fn threshold_boundary_goes_left() {
        let root = TreeNode::Split {
            feature: 0,
            threshold: 1.0,
            left: Box::new(TreeNode::Leaf {
                prediction: -1.0,
                n_samples: 1,
                impurity: 0.0,
            }),
            right: Box::new(TreeNode::Leaf {
                prediction: 1.0,
                n_samples: 1,
                impurity: 0.0,
            }),
        };
        assert_eq!(root.predict_row(&[1.0]), -1.0);
        assert_eq!(root.predict_row(&[1.0 + 1e-15]), 1.0);
    }

    #[test]
    fn leaf_only_tree_is_constant() {
        let t = fit_cart(
            &col(&[1.0, 2.0, 3.0]),
            &[4.0; 3],
            TreeTask::Regress,
            TreeParams::default(),
        )
        .unwrap();
        assert!(matches!(t.root, TreeNode::Leaf { impurity, .. } if impurity == 0.0));
        assert_eq!(t.predict(&col(&[-10.0, 10.0])).unwrap(), vec![4.0, 4.0]);
    }

    #[test]
    fn majority_tie_goes_to_lower_class() {
        let x = col(&[1.0, 1.0]);
        let t = fit_cart(&x, &[1.0, 0.0], TreeTask::Classify, TreeParams::default()).unwrap();
        assert!(matches!(t.root, TreeNode::Leaf { prediction, .. } if prediction == 0.0));
    }

    #[test]
    fn depth_limit_respected() {
        let x = col(&(0..32).map(f64::from).collect::<Vec<_>>());
        let y: Vec<f64> = (0..32).map(|i| f64::from(i * i)).collect();
        let params = TreeParams {
            max_depth: Some(3),
            ..Default::default()
        };
        let t = fit_cart(&x, &y, TreeTask::Regress, params).unwrap();
        assert!(t.root.depth() <= 3);
        assert_eq!(t.root.n_leaves(), 8);
    }

    #[test]
    fn min_samples_leaf_respected() {
        fn check(node: &TreeNode) {
            match node {
                TreeNode::Leaf { n_samples, .. } => assert!(*n_samples >= 4),
                TreeNode::Split { left, right, .. } => {
                    check(left);
                    check(right)
                }
            }
        }
        let x = col(&(0..40).map(f64::from).collect::<Vec<_>>());
        let y: Vec<f64> = (0..40).map(|i| f64::from(i % 7)).collect();
        let params = TreeParams {
            min_samples_leaf: 4,
            ..Default::default()
        };
        check(&fit_cart(&x, &y, TreeTask::Regress, params).unwrap().root);
    }

    #[test]
    fn empty_input_rejected() {
        let x = Matrix::zeros(0, 2);
        assert!(fit_cart(&x, &[], TreeTask::Regress, TreeParams::default()).is_err());
    }

    #[test]
    fn forest_of_one_without_bootstrap_is_cart() {
        let x = Matrix::from_rows(
            &(0..30)
                .map(|i| vec![f64::from(i % 5), f64::from((i * 7) % 11), f64::from(i) * 0.1])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let y: Vec<f64> = (0..30).map(|i| f64::from((i * 13) % 17)).collect();
        let tree = fit_cart(&x, &y, TreeTask::Regress, TreeParams::default()).unwrap();
        let params = ForestParams {
            n_trees: 1,
            max_features: Some(3),
            bootstrap: false,
            ..Default::default()
        };
        let forest = fit_random_forest(&x, &y, TreeTask::Regress, params).unwrap();
        assert_eq!(forest.predict(&x).unwrap(), tree.predict(&x).unwrap());
    }

    #[test]
    fn forest_is_deterministic_and_bounded_by_trees() {
        let x = Matrix::from_rows(
            &(0..50)
                .map(|i| vec![f64::from(i), f64::from(i % 3)])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let y: Vec<f64> = (0..50).map(|i| (f64::from(i) * 0.3).sin()).collect();
        let params = ForestParams {
            n_trees: 20,
            seed: 9,
            ..Default::default()
        };
        let a = fit_random_forest(&x, &y, TreeTask::Regress, params).unwrap();
        let b = fit_random_forest(&x, &y, TreeTask::Regress, params).unwrap();
        assert_eq!(a, b);
        let pred = a.predict(&x).unwrap();
        let per = a.tree_predictions(&x).unwrap();
        for i in 0..50 {
            let lo = per.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
            let hi = per.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
            assert!(pred[i] >= lo - 1e-12 && pred[i] <= hi + 1e-12);
        }
    }

    #[test]
    fn identical_trees_average_to_one_tree() {
        let x = col(&[0.0, 1.0, 2.0, 3.0]);
        let y = [1.0, 3.0, 2.0, 5.0];
        let tree = fit_cart(&x, &y, TreeTask::Regress, TreeParams::default()).unwrap();
        let forest = ForestModel {
            trees: vec![tree.clone(); 5],
            per_tree_seeds: vec![0; 5],
            max_features: 1,
            n_trees: 5,
            task: TreeTask::Regress,
            bootstrap: false,
        };
        assert_eq!(forest.predict(&x).unwrap(), tree.predict(&x).unwrap());
    }

    #[test]
    fn train_mse_non_increasing_in_depth() {
        let x = Matrix::from_rows(
            &(0..60)
                .map(|i| vec![(f64::from(i) * 0.37).sin(), f64::from(i % 9)])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let y: Vec<f64> = (0..60).map(|i| (f64::from(i) * 0.11).cos() * 3.0).collect();
        let mut prev = f64::INFINITY;
        for depth in 0..10 {
            let params = TreeParams {
                max_depth: Some(depth),
                ..Default::default()
            };
            let p = fit_cart(&x, &y, TreeTask::Regress, params)
                .unwrap()
                .predict(&x)
                .unwrap();
            let mse = p.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 60.0;
            assert!(mse <= prev + 1e-12);
            prev = mse;
        }
    }

    #[test]
    fn invalid_forest_params() {
        let x = col(&[0.0, 1.0, 2.0]);
        let y = [0.0, 1.0, 0.0];
        let bad_trees = ForestParams {
            n_trees: 0,
            ..Default::default()
        };
        assert!(fit_random_forest(&x, &y, TreeTask::Regress, bad_trees).is_err());
        let bad_feat = ForestParams {
            max_features: Some(2),
            ..Default::default()
        };
        assert!(fit_random_forest(&x, &y, TreeTask::Regress, bad_feat).is_err());
    }

    #[test]
    fn default_feature_counts() {
        assert_eq!(default_max_features(TreeTask::Regress, 7), 3);
        assert_eq!(default_max_features(TreeTask::Classify, 7), 3);
        assert_eq!(default_max_features(TreeTask::Classify, 16), 4);
    }
}
