//! Gradient boosting of depth-limited regression trees on the logistic loss.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::index::sample;

use super::binning::bin_frame;
use super::tree::{grow, GrowParams, LeastSquares, SecondOrder};
use super::{check_training_input, log_loss_from_scores, sigmoid, LearnerConfig, LearnerKind, ModelParams, TrainedModel, TrainingMeta};
use crate::data::Frame;
use crate::error::{Error, Result};
use crate::rng;

/// Stage shrinkage is halved at most this many times when a stage would
/// raise the training loss.
const MAX_HALVINGS: usize = 30;

/// Log-odds of the base rate, kept finite for single-class targets.
fn base_score(y: &[u8]) -> f64 {
    let n = y.len() as f64;
    let pos = y.iter().map(|&v| f64::from(v)).sum::<f64>();
    let p = (pos / n).clamp(1e-12, 1.0 - 1e-12);
    (p / (1.0 - p)).ln()
}

pub fn train_gradient_boosting(x: &Frame, y: &[u8], cfg: &LearnerConfig) -> Result<TrainedModel> {
    let second_order = match cfg.kind {
        LearnerKind::GradientBoosting => false,
        LearnerKind::GradientBoostingL2 => true,
        _ => return Err(Error::param("train_gradient_boosting needs a boosting config")),
    };
    cfg.validate()?;
    check_training_input(x, y)?;
    let h = &cfg.hyperparameters;
    let n = x.n_rows();
    let cols = bin_frame(x, h.max_bins);
    let params = GrowParams { max_depth: h.depth, min_leaf: h.min_leaf, mtry: None };
    let base = base_score(y);
    let mut f = vec![base; n];
    let mut loss = log_loss_from_scores(&f, y);
    let mut history = vec![loss];
    let mut trees = Vec::with_capacity(h.trees);
    let mut r = rng::seeded(cfg.seed);
    let mut g = vec![0.0; n];
    let mut hs = vec![0.0; n];
    let mut candidate = vec![0.0; n];
    let n_sub = ((h.subsample * n as f64).round() as usize).clamp(1, n);

    for _ in 0..h.trees {
        for i in 0..n {
            let p = sigmoid(f[i]);
            g[i] = p - f64::from(y[i]);
            hs[i] = p * (1.0 - p);
        }
        let mut rows: Vec<usize> = if n_sub < n {
            let mut s = sample(&mut r, n, n_sub).into_vec();
            s.sort_unstable();
            s
        } else {
            (0..n).collect()
        };
        let mut grown = if second_order {
            grow(&cols, &SecondOrder { g: &g, h: &hs, lambda: h.l2_leaf }, &mut rows, &params, &mut r)
        } else {
            grow(&cols, &LeastSquares { g: &g, h: &hs }, &mut rows, &params, &mut r)
        };
        let delta: Vec<f64> = (0..n).map(|i| grown.predict_binned(&cols, i)).collect();
        let mut eta = h.learning_rate;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            for i in 0..n {
                candidate[i] = f[i] + eta * delta[i];
            }
            let l = log_loss_from_scores(&candidate, y);
            if l <= loss {
                loss = l;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            eta = 0.0;
        } else {
            core::mem::swap(&mut f, &mut candidate);
        }
        grown.scale_leaves(eta);
        trees.push(grown.tree);
        history.push(loss);
    }
    Ok(TrainedModel {
        kind: cfg.kind,
        config: cfg.clone(),
        feature_names: x.names().to_vec(),
        params: ModelParams::Boosted { base_score: base, trees },
        meta: TrainingMeta { iterations: h.trees, converged: true, oob_accuracy: None, loss_history: history },
    })
}
