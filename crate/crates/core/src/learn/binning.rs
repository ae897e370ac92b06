//! Per-feature histogram bins. A feature with at most `max_bins` distinct
//! values gets one bin per value, so splits are exactly those of CART;
//! otherwise bins are quantile groups of the distinct values.

use alloc::vec::Vec;

use crate::data::Frame;

#[derive(Debug, Clone)]
pub(crate) struct BinnedColumn {
    pub bins: Vec<u16>,
    /// `thresholds[b]` separates bin `b` from bin `b + 1`; rows in bins
    /// `<= b` satisfy `x <= thresholds[b]`.
    pub thresholds: Vec<f64>,
}

impl BinnedColumn {
    pub fn n_bins(&self) -> usize {
        self.thresholds.len() + 1
    }
}

pub(crate) fn bin_column(values: &[f64], max_bins: usize) -> BinnedColumn {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // distinct values with multiplicities
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for &x in &sorted {
        match distinct.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => distinct.push((x, 1)),
        }
    }
    let mut thresholds = Vec::new();
    if distinct.len() <= max_bins {
        for w in distinct.windows(2) {
            thresholds.push(0.5 * (w[0].0 + w[1].0));
        }
    } else {
        let n = values.len() as f64;
        let mut seen = 0usize;
        let mut next_cut = 1;
        for w in distinct.windows(2) {
            seen += w[0].1;
            if seen as f64 >= n * next_cut as f64 / max_bins as f64 {
                thresholds.push(0.5 * (w[0].0 + w[1].0));
                while seen as f64 >= n * next_cut as f64 / max_bins as f64 {
                    next_cut += 1;
                }
            }
        }
    }
    let bins = values
        .iter()
        .map(|&x| thresholds.partition_point(|&t| t < x) as u16)
        .collect();
    BinnedColumn { bins, thresholds }
}

pub(crate) fn bin_frame(frame: &Frame, max_bins: usize) -> Vec<BinnedColumn> {
    frame.columns().iter().map(|c| bin_column(c, max_bins)).collect()
}
