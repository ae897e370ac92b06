//! Midranks and pseudo-observations.

use alloc::vec::Vec;

/// 1-based ranks with ties replaced by the average of the positions they span.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]].total_cmp(&values[order[start]]).is_eq() {
            end += 1;
        }
        // positions start+1 ..= end share the mean rank
        let mid = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    ranks
}

/// `midrank / (n + 1)`: maps a column into the open unit interval.
pub fn pseudo_observations(values: &[f64]) -> Vec<f64> {
    let scale = (values.len() + 1) as f64;
    midranks(values).into_iter().map(|r| r / scale).collect()
}
