//! Binary decision trees grown on binned features.

use alloc::vec::Vec;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::binning::BinnedColumn;
use crate::data::Frame;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_row(&self, x: impl Fn(usize) -> f64) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split { feature, threshold, left, right } => {
                    i = if x(feature) <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict(&self, frame: &Frame, row: usize) -> f64 {
        self.predict_row(|j| frame.column(j)[row])
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn scale_leaves(&mut self, factor: f64) {
        for n in &mut self.nodes {
            if let Node::Leaf { value } = n {
                *value *= factor;
            }
        }
    }
}

/// A grown tree plus, per node, the bin index its split uses.
pub(crate) struct GrownTree {
    pub tree: Tree,
    split_bins: Vec<u16>,
}

impl GrownTree {
    /// Same routing as `Tree::predict`, on the training bins.
    pub fn predict_binned(&self, cols: &[BinnedColumn], row: usize) -> f64 {
        let mut i = 0;
        loop {
            match self.tree.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split { feature, left, right, .. } => {
                    i = if cols[feature].bins[row] <= self.split_bins[i] { left } else { right };
                }
            }
        }
    }

    pub fn scale_leaves(&mut self, factor: f64) {
        self.tree.scale_leaves(factor);
    }
}

/// Split criterion over per-bin sufficient statistics.
pub(crate) trait Criterion {
    /// Per-bin accumulator.
    type Stats: Copy + Default;
    fn add(stats: &mut Self::Stats, row: usize, weight: u32, ctx: &Self);
    fn merge(a: &mut Self::Stats, b: &Self::Stats);
    fn difference(a: &Self::Stats, b: &Self::Stats) -> Self::Stats;
    fn count(s: &Self::Stats) -> f64;
    /// Larger is better; a split is worth taking when
    /// `score(left) + score(right) >= score(parent)`.
    fn score(&self, s: &Self::Stats) -> f64;
    fn leaf_value(&self, s: &Self::Stats) -> f64;
    fn is_pure(&self, s: &Self::Stats) -> bool;
}

pub(crate) struct GrowParams {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Number of non-constant features to examine per node (`None` = all).
    pub mtry: Option<usize>,
}

struct Pending {
    start: usize,
    end: usize,
    depth: usize,
    node: usize,
}

/// Grows a tree over `rows` (duplicates allowed: they act as weights).
pub(crate) fn grow<C: Criterion>(
    cols: &[BinnedColumn],
    crit: &C,
    rows: &mut [usize],
    params: &GrowParams,
    rng: &mut Rng,
) -> GrownTree {
    let d = cols.len();
    let mut nodes: Vec<Node> = alloc::vec![Node::Leaf { value: 0.0 }];
    let mut split_bins: Vec<u16> = alloc::vec![0];
    let mut stack = alloc::vec![Pending { start: 0, end: rows.len(), depth: 0, node: 0 }];
    let mut order: Vec<usize> = (0..d).collect();
    let mut hist: Vec<C::Stats> = Vec::new();

    while let Some(p) = stack.pop() {
        let slice = &mut rows[p.start..p.end];
        let mut total = C::Stats::default();
        for &r in slice.iter() {
            C::add(&mut total, r, 1, crit);
        }
        let n = slice.len();
        let leaf = Node::Leaf { value: crit.leaf_value(&total) };
        let depth_ok = params.max_depth.is_none_or(|m| p.depth < m);
        if !depth_ok || n < 2 * params.min_leaf || crit.is_pure(&total) {
            nodes[p.node] = leaf;
            continue;
        }
        let parent_score = crit.score(&total);
        let mut best: Option<(f64, usize, usize)> = None;
        let budget = params.mtry.unwrap_or(d);
        let mut examined = 0;
        // partial Fisher-Yates: draw features until `budget` non-constant ones are seen
        for k in 0..d {
            if examined >= budget {
                break;
            }
            if params.mtry.is_some() {
                let pick = rng.random_range(k..d);
                order.swap(k, pick);
            }
            let j = if params.mtry.is_some() { order[k] } else { k };
            let col = &cols[j];
            hist.clear();
            hist.resize(col.n_bins(), C::Stats::default());
            for &r in slice.iter() {
                C::add(&mut hist[col.bins[r] as usize], r, 1, crit);
            }
            if hist.iter().filter(|s| C::count(s) > 0.0).count() < 2 {
                continue;
            }
            examined += 1;
            let mut left = C::Stats::default();
            for b in 0..col.n_bins() - 1 {
                C::merge(&mut left, &hist[b]);
                let nl = C::count(&left);
                let nr = n as f64 - nl;
                if nl < params.min_leaf as f64 {
                    continue;
                }
                if nr < params.min_leaf as f64 {
                    break;
                }
                if C::count(&hist[b]) == 0.0 {
                    continue;
                }
                let right = C::difference(&total, &left);
                let s = crit.score(&left) + crit.score(&right);
                if best.is_none_or(|(bs, _, _)| s > bs) {
                    best = Some((s, j, b));
                }
            }
        }
        let Some((score, feature, bin)) = best else {
            nodes[p.node] = leaf;
            continue;
        };
        if score < parent_score - 1e-12 * parent_score.abs().max(1.0) {
            nodes[p.node] = leaf;
            continue;
        }
        // partition in place: bins <= `bin` to the left
        let col = &cols[feature];
        let mut i = 0;
        let mut j = n;
        while i < j {
            if col.bins[slice[i]] as usize <= bin {
                i += 1;
            } else {
                j -= 1;
                slice.swap(i, j);
            }
        }
        let mid = p.start + i;
        let (l, r) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { value: 0.0 });
        nodes.push(Node::Leaf { value: 0.0 });
        split_bins.push(0);
        split_bins.push(0);
        nodes[p.node] = Node::Split { feature, threshold: col.thresholds[bin], left: l, right: r };
        split_bins[p.node] = bin as u16;
        // right pushed first so the left subtree is grown first
        stack.push(Pending { start: mid, end: p.end, depth: p.depth + 1, node: r });
        stack.push(Pending { start: p.start, end: mid, depth: p.depth + 1, node: l });
    }
    GrownTree { tree: Tree { nodes }, split_bins }
}

/// Gini criterion on 0/1 labels. Score is `sum_k n_k^2 / n`, so the gain of a
/// split equals the drop in weighted Gini impurity.
pub(crate) struct Gini<'a> {
    pub y: &'a [u8],
}

impl Criterion for Gini<'_> {
    type Stats = [f64; 2];

    #[inline]
    fn add(stats: &mut [f64; 2], row: usize, weight: u32, ctx: &Self) {
        stats[usize::from(ctx.y[row])] += f64::from(weight);
    }

    fn merge(a: &mut [f64; 2], b: &[f64; 2]) {
        a[0] += b[0];
        a[1] += b[1];
    }

    fn difference(a: &[f64; 2], b: &[f64; 2]) -> [f64; 2] {
        [a[0] - b[0], a[1] - b[1]]
    }

    fn count(s: &[f64; 2]) -> f64 {
        s[0] + s[1]
    }

    fn score(&self, s: &[f64; 2]) -> f64 {
        let n = s[0] + s[1];
        if n == 0.0 {
            0.0
        } else {
            (s[0] * s[0] + s[1] * s[1]) / n
        }
    }

    fn leaf_value(&self, s: &[f64; 2]) -> f64 {
        s[1] / (s[0] + s[1]).max(1.0)
    }

    fn is_pure(&self, s: &[f64; 2]) -> bool {
        s[0] == 0.0 || s[1] == 0.0
    }
}

/// Gradient statistics for boosting.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct GradStats {
    pub g: f64,
    pub h: f64,
    pub n: f64,
}

/// Least-squares fit to the negative gradient; Newton leaf values `-G/H`.
pub(crate) struct LeastSquares<'a> {
    pub g: &'a [f64],
    pub h: &'a [f64],
}

/// Second-order gain `G^2/(H + lambda)` and leaf weights `-G/(H + lambda)`.
pub(crate) struct SecondOrder<'a> {
    pub g: &'a [f64],
    pub h: &'a [f64],
    pub lambda: f64,
}

macro_rules! grad_common {
    () => {
        type Stats = GradStats;

        #[inline]
        fn add(s: &mut GradStats, row: usize, weight: u32, ctx: &Self) {
            let w = f64::from(weight);
            s.g += w * ctx.g[row];
            s.h += w * ctx.h[row];
            s.n += w;
        }

        fn merge(a: &mut GradStats, b: &GradStats) {
            a.g += b.g;
            a.h += b.h;
            a.n += b.n;
        }

        fn difference(a: &GradStats, b: &GradStats) -> GradStats {
            GradStats { g: a.g - b.g, h: a.h - b.h, n: a.n - b.n }
        }

        fn count(s: &GradStats) -> f64 {
            s.n
        }

        fn is_pure(&self, _s: &GradStats) -> bool {
            false
        }
    };
}

const HESSIAN_FLOOR: f64 = 1e-12;

impl Criterion for LeastSquares<'_> {
    grad_common!();

    fn score(&self, s: &GradStats) -> f64 {
        if s.n == 0.0 {
            0.0
        } else {
            s.g * s.g / s.n
        }
    }

    fn leaf_value(&self, s: &GradStats) -> f64 {
        -s.g / s.h.max(HESSIAN_FLOOR)
    }
}

impl Criterion for SecondOrder<'_> {
    grad_common!();

    fn score(&self, s: &GradStats) -> f64 {
        s.g * s.g / (s.h + self.lambda)
    }

    fn leaf_value(&self, s: &GradStats) -> f64 {
        -s.g / (s.h + self.lambda).max(HESSIAN_FLOOR)
    }
}
