//! Tabular data: named numeric columns plus a target, binarization,
//! pseudo-observations, stratified splitting and standardization.

use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

#[allow(unused_imports)]
use num_traits::Float;

use crate::exec::Executor;
use crate::rank::pseudo_observations;
use crate::{rng, Error, Result};

/// Column-major numeric matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    rows: usize,
}

impl Frame {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch { left: names.len(), right: columns.len() });
        }
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::LengthMismatch { left: rows, right: c.len() });
        }
        Ok(Frame { names, columns, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut Vec<f64> {
        &mut self.columns[j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Keeps the given columns, in the given order.
    pub fn select(&self, cols: &[usize]) -> Frame {
        Frame {
            names: cols.iter().map(|&j| self.names[j].clone()).collect(),
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
            rows: self.rows,
        }
    }

    pub fn select_names(&self, names: &[String]) -> Result<Frame> {
        let idx = names
            .iter()
            .map(|n| self.index_of(n).ok_or_else(|| Error::UnknownFeature(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.select(&idx))
    }

    pub fn take_rows(&self, rows: &[usize]) -> Frame {
        Frame {
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| rows.iter().map(|&i| c[i]).collect()).collect(),
            rows: rows.len(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }
}

fn is_constant(col: &[f64]) -> bool {
    col.windows(2).all(|w| w[0] == w[1])
}

/// Features plus the raw (possibly three-level) target.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub features: Frame,
    pub target_raw: Vec<f64>,
}

impl RawDataset {
    pub fn new(features: Frame, target_raw: Vec<f64>) -> Result<Self> {
        if target_raw.is_empty() {
            return Err(Error::param("dataset has no rows"));
        }
        if features.n_cols() > 0 && features.n_rows() != target_raw.len() {
            return Err(Error::LengthMismatch { left: features.n_rows(), right: target_raw.len() });
        }
        if let Some(j) = (0..features.n_cols()).find(|&j| is_constant(features.column(j))) {
            return Err(Error::ZeroVariance(features.names()[j].clone()));
        }
        Ok(RawDataset { features, target_raw })
    }

    pub fn n_rows(&self) -> usize {
        self.target_raw.len()
    }
}

/// Features plus a 0/1 target.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    pub features: Frame,
    pub target: Vec<u8>,
}

impl BinaryDataset {
    pub fn new(features: Frame, target: Vec<u8>) -> Result<Self> {
        if features.n_rows() != target.len() {
            return Err(Error::LengthMismatch { left: features.n_rows(), right: target.len() });
        }
        if target.iter().any(|&y| y > 1) {
            return Err(Error::param("binary target must contain only 0 and 1"));
        }
        Ok(BinaryDataset { features, target })
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    pub fn take_rows(&self, rows: &[usize]) -> BinaryDataset {
        BinaryDataset {
            features: self.features.take_rows(rows),
            target: rows.iter().map(|&i| self.target[i]).collect(),
        }
    }

    pub fn prevalence(&self) -> f64 {
        self.target.iter().filter(|&&y| y == 1).count() as f64 / self.n_rows() as f64
    }
}

/// Maps label 0 to 0 and labels 1, 2 to 1.
pub fn binarize_target(raw: RawDataset) -> Result<BinaryDataset> {
    let target = raw
        .target_raw
        .iter()
        .map(|&y| match y {
            _ if y == 0.0 => Ok(0u8),
            _ if y == 1.0 || y == 2.0 => Ok(1u8),
            _ => Err(Error::UnexpectedLabel(y)),
        })
        .collect::<Result<Vec<_>>>()?;
    BinaryDataset::new(raw.features, target)
}

/// Pseudo-observations of every feature column and of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMatrix {
    pub names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub target: Vec<f64>,
}

impl PseudoMatrix {
    pub fn from_dataset<E: Executor>(data: &BinaryDataset, exec: &E) -> Self {
        let features = exec.map_indexed(data.n_features(), |j| pseudo_observations(data.features.column(j)));
        let y: Vec<f64> = data.target.iter().map(|&t| f64::from(t)).collect();
        PseudoMatrix {
            names: data.features.names().to_vec(),
            features,
            target: pseudo_observations(&y),
        }
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub seed: u64,
}

fn class_rows(target: &[u8]) -> [Vec<usize>; 2] {
    let mut by_class = [Vec::new(), Vec::new()];
    for (i, &y) in target.iter().enumerate() {
        by_class[usize::from(y)].push(i);
    }
    by_class
}

/// Per-class shuffled 80/20 (or `test_fraction`) split. Both index lists are
/// returned in ascending order.
pub fn stratified_split(data: &BinaryDataset, test_fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::param(alloc::format!("test fraction must lie in (0, 1), got {test_fraction}")));
    }
    let by_class = class_rows(&data.target);
    if by_class.iter().any(|c| c.len() < 2) {
        return Err(Error::SingleClass("a stratified split needs both classes with at least two rows each"));
    }
    let mut train_rows = Vec::with_capacity(data.n_rows());
    let mut test_rows = Vec::new();
    for (class, rows) in by_class.into_iter().enumerate() {
        let mut rows = rows;
        let mut r = rng::seeded(rng::subseed(seed, class as u64));
        rows.shuffle(&mut r);
        let n_test = ((rows.len() as f64 * test_fraction).round() as usize).clamp(1, rows.len() - 1);
        test_rows.extend_from_slice(&rows[..n_test]);
        train_rows.extend_from_slice(&rows[n_test..]);
    }
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok(SplitIndices { train_rows, test_rows, seed })
}

/// `k` stratified folds: each class is shuffled and dealt round-robin.
/// Each fold is returned in ascending row order.
pub fn stratified_folds(target: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::param("need at least two folds"));
    }
    let by_class = class_rows(target);
    let smallest = by_class.iter().map(Vec::len).min().unwrap_or(0);
    if smallest < k {
        return Err(Error::SampleTooSmall { need: k, got: smallest });
    }
    let mut folds = alloc::vec![Vec::new(); k];
    let mut offset = 0;
    for (class, rows) in by_class.into_iter().enumerate() {
        let mut rows = rows;
        let mut r = rng::seeded(rng::subseed(seed, 0x10 + class as u64));
        rows.shuffle(&mut r);
        let len = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            folds[(i + offset) % k].push(row);
        }
        // continue dealing where the previous class stopped
        offset = (offset + len) % k;
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Complement of `fold` in `0..n`, ascending. `fold` must be sorted.
pub fn complement(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - fold.len());
    let mut it = fold.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub train: Frame,
    pub test: Frame,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

/// Per-column z-scores with training mean and population standard deviation.
pub fn standardize(train: &Frame, test: &Frame) -> Result<Standardized> {
    if train.names() != test.names() {
        return Err(Error::FeatureMismatch("train and test columns differ".into()));
    }
    let n = train.n_rows() as f64;
    let mut means = Vec::with_capacity(train.n_cols());
    let mut stds = Vec::with_capacity(train.n_cols());
    for (j, col) in train.columns().iter().enumerate() {
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        if !(std > 0.0) {
            return Err(Error::ZeroVariance(train.names()[j].clone()));
        }
        means.push(mean);
        stds.push(std);
    }
    let apply = |f: &Frame| {
        let cols = f
            .columns()
            .iter()
            .enumerate()
            .map(|(j, c)| c.iter().map(|x| (x - means[j]) / stds[j]).collect())
            .collect();
        Frame { names: f.names.clone(), columns: cols, rows: f.rows }
    };
    let (train_z, test_z) = (apply(train), apply(test));
    Ok(Standardized { train: train_z, test: test_z, means, stds })
}
