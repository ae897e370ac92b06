use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::metrics::accuracy;
use crate::data::Frame;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::learn::TrainedModel;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceRecord {
    pub feature: String,
    /// Baseline accuracy minus mean accuracy with the column shuffled.
    pub mean_drop: f64,
    /// Population standard deviation of the per-repeat drops.
    pub std_drop: f64,
    pub repeats: usize,
    pub drops: Vec<f64>,
}

/// Shuffles one column at a time and reports the accuracy lost.
/// Repeat `r` of feature `j` uses its own sub-seed of `seed`.
pub fn permutation_importance<E: Executor>(
    model: &TrainedModel,
    x: &Frame,
    y: &[u8],
    repeats: usize,
    seed: u64,
    exec: &E,
) -> Result<Vec<ImportanceRecord>> {
    if repeats == 0 {
        return Err(Error::param("repeats must be positive"));
    }
    let baseline = accuracy(y, &model.predict(x)?)?;
    let d = x.n_cols();
    let drops = exec.map_indexed(d * repeats, |task| -> Result<f64> {
        let (j, r) = (task / repeats, task % repeats);
        let mut shuffled = x.clone();
        let mut g = rng::seeded(rng::subseed2(seed, j as u64, r as u64));
        shuffled.column_mut(j).shuffle(&mut g);
        Ok(baseline - accuracy(y, &model.predict(&shuffled)?)?)
    });
    let drops = drops.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(drops
        .chunks(repeats)
        .zip(x.names())
        .map(|(ds, name)| {
            let m = ds.iter().sum::<f64>() / repeats as f64;
            let var = ds.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / repeats as f64;
            ImportanceRecord { feature: name.clone(), mean_drop: m, std_drop: var.sqrt(), repeats, drops: ds.to_vec() }
        })
        .collect())
}
