//! Random forest: bootstrap-aggregated Gini trees with hard votes.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;

use super::binning::bin_frame;
use super::tree::{grow, Gini, GrowParams};
use super::{check_training_input, LearnerConfig, LearnerKind, ModelParams, TrainedModel, TrainingMeta};
use crate::data::Frame;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::rng;

pub fn train_random_forest<E: Executor>(x: &Frame, y: &[u8], cfg: &LearnerConfig, exec: &E) -> Result<TrainedModel> {
    if cfg.kind != LearnerKind::RandomForest {
        return Err(Error::param("train_random_forest needs a random_forest config"));
    }
    cfg.validate()?;
    check_training_input(x, y)?;
    let h = &cfg.hyperparameters;
    let n = x.n_rows();
    let d = x.n_cols();
    let cols = bin_frame(x, h.max_bins);
    let mtry = ((d as f64).sqrt().ceil() as usize).clamp(1, d.max(1));
    let params = GrowParams { max_depth: h.depth, min_leaf: h.min_leaf, mtry: Some(mtry) };
    let crit = Gini { y };

    // each tree returns itself plus its out-of-bag votes as (row, vote)
    let grown = exec.map_indexed(h.trees, |t| {
        let mut r = rng::seeded(rng::subseed(cfg.seed, t as u64));
        let mut rows: Vec<usize> = (0..n).map(|_| r.random_range(0..n)).collect();
        let mut in_bag = vec![false; n];
        for &i in &rows {
            in_bag[i] = true;
        }
        let tree = grow(&cols, &crit, &mut rows, &params, &mut r);
        let oob: Vec<(usize, bool)> = (0..n)
            .filter(|&i| !in_bag[i])
            .map(|i| (i, tree.predict_binned(&cols, i) >= 0.5))
            .collect();
        (tree.tree, oob)
    });

    let mut votes = vec![[0u32; 2]; n];
    let mut trees = Vec::with_capacity(grown.len());
    for (tree, oob) in grown {
        for (i, v) in oob {
            votes[i][usize::from(v)] += 1;
        }
        trees.push(tree);
    }
    let mut scored = 0usize;
    let mut correct = 0usize;
    for (v, &t) in votes.iter().zip(y) {
        if v[0] + v[1] > 0 {
            scored += 1;
            let pred = u8::from(v[1] >= v[0]);
            correct += usize::from(pred == t);
        }
    }
    let oob_accuracy = (scored > 0).then(|| correct as f64 / scored as f64);
    Ok(TrainedModel {
        kind: LearnerKind::RandomForest,
        config: cfg.clone(),
        feature_names: x.names().to_vec(),
        params: ModelParams::Forest { trees },
        meta: TrainingMeta { iterations: h.trees, converged: true, oob_accuracy, loss_history: Vec::new() },
    })
}
