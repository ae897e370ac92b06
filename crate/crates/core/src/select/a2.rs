//! Ranking by the A2 upper-tail dependence coefficient between each
//! feature and the target.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use serde::{Deserialize, Serialize};

use super::check_k;
use crate::copula::{fit_theta_mle, fit_theta_tau, upper_tail_coefficient, Estimator, FitOptions, PseudoSample, ThetaEstimate};
use crate::data::PseudoMatrix;
use crate::error::Result;
use crate::exec::Executor;

pub const TIE_RULE: &str =
    "lambda_u descending, then tau_hat descending, then feature index ascending; failed fits last by index";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub name: String,
    pub index: usize,
    pub theta_hat: Option<f64>,
    pub lambda_u: Option<f64>,
    pub tau_hat: Option<f64>,
    pub clamped: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub entries: Vec<RankEntry>,
    pub k: usize,
    pub estimator: Estimator,
    pub tie_rule: String,
}

impl FeatureRanking {
    /// Column indices of the top `k` entries, in rank order.
    pub fn selected(&self) -> Vec<usize> {
        self.entries.iter().take(self.k).map(|e| e.index).collect()
    }

    pub fn selected_names(&self) -> Vec<String> {
        self.entries.iter().take(self.k).map(|e| e.name.clone()).collect()
    }
}

fn fit_one(u: &[f64], v: &[f64], estimator: Estimator, opts: &FitOptions) -> Result<ThetaEstimate> {
    let sample = PseudoSample::new(u.to_vec(), v.to_vec())?;
    let tau_fit = fit_theta_tau(&sample, opts)?;
    match estimator {
        Estimator::TauInversion => Ok(tau_fit),
        Estimator::PseudoMle => fit_theta_mle(&sample, tau_fit.theta, opts),
    }
}

fn compare(a: &RankEntry, b: &RankEntry) -> Ordering {
    match (a.lambda_u, b.lambda_u) {
        (Some(la), Some(lb)) => lb
            .total_cmp(&la)
            .then_with(|| b.tau_hat.unwrap_or(f64::NEG_INFINITY).total_cmp(&a.tau_hat.unwrap_or(f64::NEG_INFINITY)))
            .then(a.index.cmp(&b.index)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.index.cmp(&b.index),
    }
}

/// Fits theta for every feature against the target and ranks features by
/// `lambda_u = 2 - 2^(1/(2 theta))`. A feature whose fit fails is kept,
/// with its error recorded, at the bottom of the ranking.
pub fn rank_a2<E: Executor>(
    pseudo: &PseudoMatrix,
    k: usize,
    estimator: Estimator,
    opts: &FitOptions,
    exec: &E,
) -> Result<FeatureRanking> {
    check_k(k, pseudo.n_features())?;
    let mut entries = exec.map_indexed(pseudo.n_features(), |j| {
        let name = pseudo.names[j].clone();
        match fit_one(&pseudo.features[j], &pseudo.target, estimator, opts) {
            Ok(fit) => RankEntry {
                name,
                index: j,
                theta_hat: Some(fit.theta.value()),
                lambda_u: Some(upper_tail_coefficient(fit.theta).lambda_u),
                tau_hat: Some(fit.tau_hat),
                clamped: fit.clamped,
                error: None,
            },
            Err(e) => RankEntry {
                name,
                index: j,
                theta_hat: None,
                lambda_u: None,
                tau_hat: None,
                clamped: false,
                error: Some(e.to_string()),
            },
        }
    });
    entries.sort_by(compare);
    Ok(FeatureRanking { entries, k, estimator, tie_rule: TIE_RULE.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{BinaryDataset, Frame};
    use crate::exec::Sequential;
    use crate::rng;
    use alloc::vec;
    use rand::Rng as _;

    fn planted(n: usize, seed: u64) -> BinaryDataset {
        let mut r = rng::seeded(seed);
        let y: Vec<u8> = (0..n).map(|_| u8::from(r.random::<f64>() < 0.3)).collect();
        let mut cols = Vec::new();
        for _ in 0..4 {
            cols.push((0..n).map(|_| r.random::<f64>()).collect::<Vec<f64>>());
        }
        // planted feature sits at index 2
        cols.insert(2, y.iter().map(|&t| f64::from(t) + 1e-3 * r.random::<f64>()).collect());
        let names = ["b", "c", "a", "d", "e"].iter().map(|s| s.to_string()).collect();
        BinaryDataset::new(Frame::new(names, cols).unwrap(), y).unwrap()
    }

    #[test]
    fn planted_feature_ranks_first() {
        let data = planted(500, 4);
        let pm = PseudoMatrix::from_dataset(&data, &Sequential);
        for est in [Estimator::TauInversion, Estimator::PseudoMle] {
            let r = rank_a2(&pm, 2, est, &FitOptions::default(), &Sequential).unwrap();
            assert_eq!(r.entries[0].name, "a");
            assert_eq!(r.selected()[0], 2);
            assert_eq!(r.entries.len(), 5);
        }
    }

    #[test]
    fn lambda_and_theta_orders_agree() {
        let data = planted(300, 8);
        let pm = PseudoMatrix::from_dataset(&data, &Sequential);
        let r = rank_a2(&pm, 5, Estimator::TauInversion, &FitOptions::default(), &Sequential).unwrap();
        for w in r.entries.windows(2) {
            assert!(w[0].lambda_u.unwrap() >= w[1].lambda_u.unwrap());
            assert!(w[0].theta_hat.unwrap() >= w[1].theta_hat.unwrap());
        }
        for e in &r.entries {
            let l = 2.0 - num_traits::Float::exp2(0.5 / e.theta_hat.unwrap());
            assert!((l - e.lambda_u.unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn failed_fit_is_ranked_last() {
        let pm = PseudoMatrix {
            names: vec!["ok".into(), "short".into()],
            features: vec![vec![0.5; 3], vec![0.5; 3]],
            target: vec![0.25, 0.5, 0.75],
        };
        let r = rank_a2(&pm, 1, Estimator::TauInversion, &FitOptions::default(), &Sequential).unwrap();
        assert!(r.entries.iter().all(|e| e.error.is_some()));
        assert_eq!(r.selected(), vec![0]);
        assert!(rank_a2(&pm, 3, Estimator::TauInversion, &FitOptions::default(), &Sequential).is_err());
    }
}
