//! Plug-in mutual information between a discrete feature and a binary target.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::check_k;
use crate::data::{stratified_folds, BinaryDataset};
use crate::error::{Error, Result};
use crate::exec::Executor;

pub const MAX_LEVELS: usize = 10_000;

/// `I(X;Y)` in nats from the empirical joint table, with `0 log 0 = 0`.
pub fn mutual_information(x: &[f64], y: &[u8]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if let Some(&bad) = y.iter().find(|&&t| t > 1) {
        return Err(Error::UnexpectedLabel(f64::from(bad)));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut table: Vec<[u64; 2]> = Vec::new();
    let mut prev: Option<f64> = None;
    for &i in &order {
        if prev.is_none_or(|p| p.total_cmp(&x[i]).is_ne()) {
            table.push([0, 0]);
            if table.len() > MAX_LEVELS {
                return Err(Error::TooManyLevels { got: table.len(), limit: MAX_LEVELS });
            }
            prev = Some(x[i]);
        }
        table.last_mut().unwrap()[usize::from(y[i])] += 1;
    }
    let n = x.len() as f64;
    let col = [table.iter().map(|c| c[0]).sum::<u64>() as f64, table.iter().map(|c| c[1]).sum::<u64>() as f64];
    let mut mi = 0.0;
    for cell in &table {
        let row = (cell[0] + cell[1]) as f64;
        for (c, &count) in cell.iter().enumerate() {
            if count > 0 {
                let nxy = count as f64;
                mi += nxy / n * (nxy * n / (row * col[c])).ln();
            }
        }
    }
    Ok(mi.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiSelection {
    /// Top-k column indices, best first.
    pub selected: Vec<usize>,
    /// Mean over folds of each feature's MI, in column order.
    pub mean_mi: Vec<f64>,
    pub folds: usize,
}

/// Averages each feature's MI over the rows of each of `folds` stratified
/// folds and keeps the `k` largest (ties by column index).
pub fn select_mi<E: Executor>(data: &BinaryDataset, k: usize, folds: usize, seed: u64, exec: &E) -> Result<MiSelection> {
    let d = data.n_features();
    check_k(k, d)?;
    let parts = stratified_folds(&data.target, folds, seed)?;
    let per_feature = exec.map_indexed(d, |j| -> Result<f64> {
        let col = data.features.column(j);
        let mut total = 0.0;
        for fold in &parts {
            let x: Vec<f64> = fold.iter().map(|&i| col[i]).collect();
            let y: Vec<u8> = fold.iter().map(|&i| data.target[i]).collect();
            total += mutual_information(&x, &y)?;
        }
        Ok(total / parts.len() as f64)
    });
    let mean_mi = per_feature.into_iter().collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| mean_mi[b].total_cmp(&mean_mi[a]).then(a.cmp(&b)));
    order.truncate(k);
    Ok(MiSelection { selected: order, mean_mi, folds })
}
