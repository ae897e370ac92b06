//! Planted synthetic datasets with known answers, for tests and demos.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng as _;

use crate::data::{BinaryDataset, Frame};
use crate::error::Result;
use crate::rng;

fn names(d: usize) -> Vec<String> {
    (0..d).map(|j| format!("f{j}")).collect()
}

/// `d` fair-coin features; the target is the majority vote of the first
/// `informative` (odd) features, flipped with probability `flip`.
pub fn majority_vote(n: usize, d: usize, informative: usize, flip: f64, seed: u64) -> Result<BinaryDataset> {
    let mut r = rng::seeded(seed);
    let cols: Vec<Vec<f64>> =
        (0..d).map(|_| (0..n).map(|_| f64::from(u8::from(r.random::<bool>()))).collect()).collect();
    let y = (0..n)
        .map(|i| {
            let votes: f64 = cols[..informative].iter().map(|c| c[i]).sum();
            let label = u8::from(2.0 * votes > informative as f64);
            if r.random::<f64>() < flip {
                1 - label
            } else {
                label
            }
        })
        .collect();
    BinaryDataset::new(Frame::new(names(d), cols)?, y)
}

/// Integer-coded noise features (levels 0..10) plus one column at
/// `planted` equal to the target plus `noise * U(0,1)`. The target is 1 with
/// probability `prevalence`.
pub fn planted_copy(n: usize, d: usize, planted: usize, prevalence: f64, noise: f64, seed: u64) -> Result<BinaryDataset> {
    let mut r = rng::seeded(seed);
    let y: Vec<u8> = (0..n).map(|_| u8::from(r.random::<f64>() < prevalence)).collect();
    let cols = (0..d)
        .map(|j| {
            if j == planted {
                y.iter().map(|&t| f64::from(t) + noise * r.random::<f64>()).collect()
            } else {
                (0..n).map(|_| f64::from(r.random_range(0..10u8))).collect()
            }
        })
        .collect();
    BinaryDataset::new(Frame::new(names(d), cols)?, y)
}

/// Continuous features with a logistic target driven by the first
/// `informative` columns (coefficient `strength` each).
pub fn logistic_signal(n: usize, d: usize, informative: usize, strength: f64, seed: u64) -> Result<BinaryDataset> {
    let mut r = rng::seeded(seed);
    let cols: Vec<Vec<f64>> = (0..d).map(|_| (0..n).map(|_| r.random::<f64>() * 2.0 - 1.0).collect()).collect();
    let y = (0..n)
        .map(|i| {
            let z: f64 = cols[..informative].iter().map(|c| strength * c[i]).sum();
            u8::from(r.random::<f64>() < crate::learn::sigmoid(z))
        })
        .collect();
    BinaryDataset::new(Frame::new(names(d), cols)?, y)
}

/// `d` features uniform on (-1, 1); the target is the majority vote of the
/// signs of the first `informative` (odd) features.
pub fn majority_of_signs(n: usize, d: usize, informative: usize, seed: u64) -> Result<BinaryDataset> {
    let mut r = rng::seeded(seed);
    let cols: Vec<Vec<f64>> = (0..d).map(|_| (0..n).map(|_| r.random::<f64>() * 2.0 - 1.0).collect()).collect();
    let y = (0..n)
        .map(|i| {
            let votes = cols[..informative].iter().filter(|c| c[i] > 0.0).count();
            u8::from(2 * votes > informative)
        })
        .collect();
    BinaryDataset::new(Frame::new(names(d), cols)?, y)
}
