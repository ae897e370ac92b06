//! Binary classifiers sharing one train / predict-probability contract.

mod binning;
mod boosting;
mod forest;
mod logistic;
mod tree;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::data::Frame;
use crate::error::{Error, Result};
use crate::exec::Executor;

pub use boosting::train_gradient_boosting;
pub use forest::train_random_forest;
pub use logistic::{train_logistic, LogisticObjective};
pub use tree::{Node, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Logistic,
    RandomForest,
    GradientBoosting,
    GradientBoostingL2,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 4] = [
        LearnerKind::RandomForest,
        LearnerKind::GradientBoostingL2,
        LearnerKind::Logistic,
        LearnerKind::GradientBoosting,
    ];

    /// Row label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            LearnerKind::Logistic => "LR",
            LearnerKind::RandomForest => "RF",
            LearnerKind::GradientBoosting => "GB",
            LearnerKind::GradientBoostingL2 => "XGB",
        }
    }

    /// Whether the learner expects standardized inputs.
    pub fn wants_standardized(self) -> bool {
        self == LearnerKind::Logistic
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparameters {
    pub trees: usize,
    /// `None` grows until leaves are pure or hit `min_leaf`.
    pub depth: Option<usize>,
    pub min_leaf: usize,
    pub learning_rate: f64,
    pub l2_leaf: f64,
    /// Logistic-regression penalty strength.
    pub l2: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub subsample: f64,
    pub max_bins: usize,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            trees: 100,
            depth: None,
            min_leaf: 5,
            learning_rate: 0.1,
            l2_leaf: 1.0,
            l2: 1.0,
            max_iterations: 1000,
            tolerance: 1e-6,
            subsample: 1.0,
            max_bins: 256,
        }
    }
}

impl Hyperparameters {
    pub fn defaults_for(kind: LearnerKind) -> Self {
        let base = Hyperparameters::default();
        match kind {
            LearnerKind::Logistic | LearnerKind::RandomForest => base,
            LearnerKind::GradientBoosting | LearnerKind::GradientBoostingL2 => {
                Hyperparameters { depth: Some(3), min_leaf: 1, ..base }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub kind: LearnerKind,
    pub hyperparameters: Hyperparameters,
    pub seed: u64,
}

impl LearnerConfig {
    pub fn new(kind: LearnerKind, seed: u64) -> Self {
        LearnerConfig { kind, hyperparameters: Hyperparameters::defaults_for(kind), seed }
    }

    /// Boosting accepts `trees = 0` (the base-rate model); everything else
    /// must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        let h = &self.hyperparameters;
        let boosting = matches!(self.kind, LearnerKind::GradientBoosting | LearnerKind::GradientBoostingL2);
        if h.trees == 0 && !boosting && self.kind != LearnerKind::Logistic {
            return Err(Error::param("trees must be positive"));
        }
        if h.depth == Some(0) {
            return Err(Error::param("depth must be at least 1"));
        }
        if h.min_leaf == 0 || h.max_iterations == 0 {
            return Err(Error::param("min_leaf and max_iterations must be positive"));
        }
        if !(h.learning_rate > 0.0 && h.learning_rate <= 1.0) {
            return Err(Error::param("learning_rate must lie in (0, 1]"));
        }
        if !(h.subsample > 0.0 && h.subsample <= 1.0) {
            return Err(Error::param("subsample must lie in (0, 1]"));
        }
        if !(h.l2_leaf > 0.0 && h.l2 > 0.0 && h.tolerance > 0.0) {
            return Err(Error::param("l2_leaf, l2 and tolerance must be positive"));
        }
        if !(2..=65_536).contains(&h.max_bins) {
            return Err(Error::param("max_bins must lie in [2, 65536]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelParams {
    Logistic { intercept: f64, weights: Vec<f64> },
    Forest { trees: Vec<Tree> },
    Boosted { base_score: f64, trees: Vec<Tree> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oob_accuracy: Option<f64>,
    /// Training log-loss after each boosting stage (index 0 is the base score).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub loss_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: LearnerKind,
    pub config: LearnerConfig,
    pub feature_names: Vec<String>,
    pub params: ModelParams,
    pub meta: TrainingMeta,
}

impl TrainedModel {
    pub fn predict_proba(&self, x: &Frame) -> Result<Vec<f64>> {
        if x.names() != self.feature_names.as_slice() {
            return Err(Error::FeatureMismatch(
                "input columns differ from the columns the model was trained on".to_string(),
            ));
        }
        let n = x.n_rows();
        let out = match &self.params {
            ModelParams::Logistic { intercept, weights } => (0..n)
                .map(|i| {
                    let z = weights.iter().enumerate().fold(*intercept, |z, (j, w)| z + w * x.column(j)[i]);
                    sigmoid(z)
                })
                .collect(),
            ModelParams::Forest { trees } => {
                let mut votes = alloc::vec![0u32; n];
                for t in trees {
                    for (i, v) in votes.iter_mut().enumerate() {
                        *v += u32::from(t.predict(x, i) >= 0.5);
                    }
                }
                let m = trees.len() as f64;
                votes.into_iter().map(|v| f64::from(v) / m).collect()
            }
            ModelParams::Boosted { base_score, trees } => {
                let mut f = alloc::vec![*base_score; n];
                for t in trees {
                    for (i, fi) in f.iter_mut().enumerate() {
                        *fi += t.predict(x, i);
                    }
                }
                f.into_iter().map(sigmoid).collect()
            }
        };
        Ok(out)
    }

    pub fn predict(&self, x: &Frame) -> Result<Vec<u8>> {
        Ok(self.predict_proba(x)?.into_iter().map(|p| u8::from(p >= 0.5)).collect())
    }
}

/// Trains the learner named by `cfg.kind`. Logistic regression expects a
/// standardized `x`; the tree learners use raw values.
pub fn train<E: Executor>(cfg: &LearnerConfig, x: &Frame, y: &[u8], exec: &E) -> Result<TrainedModel> {
    match cfg.kind {
        LearnerKind::Logistic => train_logistic(x, y, cfg),
        LearnerKind::RandomForest => train_random_forest(x, y, cfg, exec),
        LearnerKind::GradientBoosting | LearnerKind::GradientBoostingL2 => train_gradient_boosting(x, y, cfg),
    }
}

pub(crate) fn check_training_input(x: &Frame, y: &[u8]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::LengthMismatch { left: x.n_rows(), right: y.len() });
    }
    if y.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if let Some(&bad) = y.iter().find(|&&v| v > 1) {
        return Err(Error::UnexpectedLabel(f64::from(bad)));
    }
    Ok(())
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + Float::exp(-z))
    } else {
        let e = Float::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + Float::ln_1p(Float::exp(-z.abs()))
}

/// Mean logistic loss of scores `f` against labels `y`.
pub fn log_loss_from_scores(f: &[f64], y: &[u8]) -> f64 {
    let s: f64 = f.iter().zip(y).map(|(&z, &t)| softplus(z) - f64::from(t) * z).sum();
    s / f.len() as f64
}
