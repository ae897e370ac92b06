//! Tie-adjusted Kendall's tau (tau-b) in O(n log n).
//!
//! Sort by (x, y), count x ties and joint ties, then merge-sort the y
//! sequence counting inversions (discordant pairs) and finally count y ties.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// Pair counts behind tau-b. All counts are over unordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub pairs: u64,
    pub tied_x: u64,
    pub tied_y: u64,
    /// concordant minus discordant
    pub score: i64,
}

impl PairCounts {
    pub fn tau_b(&self) -> Result<f64> {
        let dx = self.pairs - self.tied_x;
        let dy = self.pairs - self.tied_y;
        if dx == 0 {
            return Err(Error::UndefinedStatistic("first margin is constant"));
        }
        if dy == 0 {
            return Err(Error::UndefinedStatistic("second margin is constant"));
        }
        Ok(self.score as f64 / ((dx as f64) * (dy as f64)).sqrt())
    }
}

fn tie_pairs(run: u64) -> u64 {
    run * (run - 1) / 2
}

/// Counts in O(n log n). Values are compared with `f64::total_cmp`.
pub fn pair_counts(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then_with(|| y[a].total_cmp(&y[b])));

    let mut tied_x = 0u64;
    let mut tied_xy = 0u64;
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        if x[a].total_cmp(&x[b]) == Ordering::Equal {
            run_x += 1;
            if y[a].total_cmp(&y[b]) == Ordering::Equal {
                run_xy += 1;
            } else {
                tied_xy += tie_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            tied_x += tie_pairs(run_x);
            tied_xy += tie_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    if n > 0 {
        tied_x += tie_pairs(run_x);
        tied_xy += tie_pairs(run_xy);
    }

    let mut ys: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let swaps = merge_sort_inversions(&mut ys);

    let mut tied_y = 0u64;
    let mut run_y = 1u64;
    for w in ys.windows(2) {
        if w[0].total_cmp(&w[1]) == Ordering::Equal {
            run_y += 1;
        } else {
            tied_y += tie_pairs(run_y);
            run_y = 1;
        }
    }
    if n > 0 {
        tied_y += tie_pairs(run_y);
    }

    let pairs = if n > 1 { tie_pairs(n as u64) } else { 0 };
    let score = pairs as i64 - tied_x as i64 - tied_y as i64 + tied_xy as i64 - 2 * swaps as i64;
    Ok(PairCounts { pairs, tied_x, tied_y, score })
}

/// Sorts ascending and returns the number of strict inversions.
fn merge_sort_inversions(values: &mut [f64]) -> u64 {
    let n = values.len();
    let mut buf = values.to_vec();
    let mut swaps = 0u64;
    let mut width = 1;
    let (mut src, mut dst): (&mut [f64], &mut [f64]) = (values, &mut buf[..]);
    let mut in_values = true;
    while width < n {
        let mut start = 0;
        while start < n {
            let mid = (start + width).min(n);
            let end = (start + 2 * width).min(n);
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if src[j].total_cmp(&src[i]) == Ordering::Less {
                    dst[k] = src[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    dst[k] = src[i];
                    i += 1;
                }
                k += 1;
            }
            dst[k..k + (mid - i)].copy_from_slice(&src[i..mid]);
            k += mid - i;
            dst[k..k + (end - j)].copy_from_slice(&src[j..end]);
            start = end;
        }
        core::mem::swap(&mut src, &mut dst);
        in_values = !in_values;
        width *= 2;
    }
    if !in_values {
        dst.copy_from_slice(src);
    }
    swaps
}

/// Tie-adjusted Kendall's tau-b of two equally long samples.
pub fn tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::SampleTooSmall { need: 2, got: x.len() });
    }
    pair_counts(x, y)?.tau_b()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_concordance() {
        assert_eq!(tau_b(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
    }

    #[test]
    fn one_discordant_pair() {
        let t = tau_b(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_margin_is_undefined() {
        assert!(matches!(
            tau_b(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]),
            Err(Error::UndefinedStatistic(_))
        ));
    }

    #[test]
    fn inversion_count_of_reversed() {
        let mut v = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert_eq!(merge_sort_inversions(&mut v), 10);
        assert_eq!(v, [1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn ties_in_both_margins() {
        // x: a a b b, y: 0 1 0 1 -> one concordant, one discordant, ties elsewhere
        let c = pair_counts(&[1.0, 1.0, 2.0, 2.0], &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.pairs, 6);
        assert_eq!(c.tied_x, 2);
        assert_eq!(c.tied_y, 2);
        assert_eq!(c.score, 0);
    }
}
