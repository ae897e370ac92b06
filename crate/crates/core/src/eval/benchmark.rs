//! One stratified split, four feature sets, four learners.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::auc::roc_auc;
use super::importance::{permutation_importance, ImportanceRecord};
use super::metrics::{metrics, Metrics};
use crate::copula::{Estimator, FitOptions};
use crate::data::{standardize, stratified_split, BinaryDataset, PseudoMatrix};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::learn::{train, LearnerConfig, LearnerKind, TrainedModel};
use crate::rng;
use crate::select::{ga_select, rank_a2, select_mi, FeatureRanking, GaOutcome, GaParams, MiSelection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSetKind {
    All,
    A2,
    Mi,
    Ga,
}

impl FeatureSetKind {
    pub const ALL: [FeatureSetKind; 4] = [FeatureSetKind::All, FeatureSetKind::A2, FeatureSetKind::Mi, FeatureSetKind::Ga];

    pub fn label(self) -> &'static str {
        match self {
            FeatureSetKind::All => "All",
            FeatureSetKind::A2 => "A2",
            FeatureSetKind::Mi => "MI",
            FeatureSetKind::Ga => "GA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectOn {
    Train,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkConfig {
    pub k: usize,
    pub seed: u64,
    pub test_fraction: f64,
    pub estimator: Estimator,
    pub select_on: SelectOn,
    pub fit_options: FitOptions,
    pub mi_folds: usize,
    pub ga: GaParams,
    pub importance_repeats: usize,
    /// Row order of every feature-set group in the report.
    pub learners: Vec<LearnerConfig>,
}

impl BenchmarkConfig {
    pub fn new(seed: u64) -> Self {
        let learners = LearnerKind::ALL
            .iter()
            .enumerate()
            .map(|(i, &kind)| LearnerConfig::new(kind, rng::subseed(seed, 100 + i as u64)))
            .collect();
        BenchmarkConfig {
            k: 5,
            seed,
            test_fraction: 0.2,
            estimator: Estimator::TauInversion,
            select_on: SelectOn::Train,
            fit_options: FitOptions::default(),
            mi_folds: 5,
            ga: GaParams::default(),
            importance_repeats: 20,
            learners,
        }
    }

    fn ga_params(&self) -> GaParams {
        GaParams { k: self.k, ..self.ga.clone() }
    }
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig::new(42)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsBlock {
    pub feature_set: String,
    pub model: String,
    pub kind: LearnerKind,
    pub features: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metrics: Option<Metrics>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub prevalence_train: f64,
    pub prevalence_test: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selections {
    pub a2: FeatureRanking,
    pub mi: Option<MiSelection>,
    pub ga: Option<GaOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: BenchmarkConfig,
    pub split: SplitSummary,
    pub selections: Selections,
    pub blocks: Vec<MetricsBlock>,
    pub importances: Vec<ImportanceRecord>,
    pub notes: Vec<String>,
}

impl EvalReport {
    pub fn block(&self, set: FeatureSetKind, kind: LearnerKind) -> Option<&MetricsBlock> {
        self.blocks.iter().find(|b| b.feature_set == set.label() && b.kind == kind)
    }
}

pub const XGB_NOTE: &str = "XGB rows use the in-repo second-order boosting variant (gradient_boosting_l2), not XGBoost";

fn evaluate_cell<E: Executor>(
    cfg: &LearnerConfig,
    cols: &[usize],
    train_set: &BinaryDataset,
    test_set: &BinaryDataset,
    exec: &E,
) -> Result<(Metrics, f64, TrainedModel)> {
    let mut x_train = train_set.features.select(cols);
    let mut x_test = test_set.features.select(cols);
    if cfg.kind.wants_standardized() {
        let s = standardize(&x_train, &x_test)?;
        x_train = s.train;
        x_test = s.test;
    }
    let model = train(cfg, &x_train, &train_set.target, exec)?;
    let proba = model.predict_proba(&x_test)?;
    let pred: Vec<u8> = proba.iter().map(|&p| u8::from(p >= 0.5)).collect();
    let m = metrics(&test_set.target, &pred)?;
    let auc = roc_auc(&test_set.target, &proba)?;
    Ok((m, auc, model))
}

/// Runs the whole protocol. Feature selection sees only training rows
/// unless `select_on` is `Full`. Failed cells are recorded, not fatal.
pub fn run_benchmark<E: Executor>(data: &BinaryDataset, cfg: &BenchmarkConfig, exec: &E) -> Result<EvalReport> {
    crate::select::check_k(cfg.k, data.n_features())?;
    if cfg.learners.is_empty() {
        return Err(Error::param("no learners configured"));
    }
    for l in &cfg.learners {
        l.validate()?;
    }
    let split = stratified_split(data, cfg.test_fraction, cfg.seed)?;
    let train_set = data.take_rows(&split.train_rows);
    let test_set = data.take_rows(&split.test_rows);
    let select_set = match cfg.select_on {
        SelectOn::Train => &train_set,
        SelectOn::Full => data,
    };

    let pseudo = PseudoMatrix::from_dataset(select_set, exec);
    let ranking = rank_a2(&pseudo, cfg.k, cfg.estimator, &cfg.fit_options, exec)?;
    let mut errors = Vec::new();
    let mi = select_mi(select_set, cfg.k, cfg.mi_folds, rng::subseed(cfg.seed, 1), exec)
        .map_err(|e| errors.push(alloc::format!("MI selection failed: {e}")))
        .ok();
    let ga = ga_select(select_set, &cfg.ga_params(), rng::subseed(cfg.seed, 2), exec)
        .map_err(|e| errors.push(alloc::format!("GA selection failed: {e}")))
        .ok();

    let all: Vec<usize> = (0..data.n_features()).collect();
    let sets: [(FeatureSetKind, Option<Vec<usize>>); 4] = [
        (FeatureSetKind::All, Some(all)),
        (FeatureSetKind::A2, Some(ranking.selected())),
        (FeatureSetKind::Mi, mi.as_ref().map(|m| m.selected.clone())),
        (FeatureSetKind::Ga, ga.as_ref().map(|g| g.selected.clone())),
    ];
    let n_models = cfg.learners.len();
    let cells = exec.map_indexed(sets.len() * n_models, |c| {
        let (set, cols) = &sets[c / n_models];
        let lcfg = &cfg.learners[c % n_models];
        let names: Vec<String> = cols
            .as_ref()
            .map(|cs| cs.iter().map(|&j| data.features.names()[j].clone()).collect())
            .unwrap_or_default();
        let mut block = MetricsBlock {
            feature_set: set.label().to_string(),
            model: lcfg.kind.label().to_string(),
            kind: lcfg.kind,
            features: names,
            metrics: None,
            auc: None,
            error: None,
        };
        let Some(cols) = cols else {
            block.error = Some("feature selection failed".to_string());
            return (block, None);
        };
        match evaluate_cell(lcfg, cols, &train_set, &test_set, exec) {
            Ok((m, auc, model)) => {
                block.metrics = Some(m);
                block.auc = Some(auc);
                let keep = *set == FeatureSetKind::A2 && lcfg.kind == LearnerKind::RandomForest;
                (block, keep.then_some(model))
            }
            Err(e) => {
                block.error = Some(e.to_string());
                (block, None)
            }
        }
    });
    let mut blocks = Vec::with_capacity(cells.len());
    let mut forest = None;
    for (b, m) in cells {
        blocks.push(b);
        if m.is_some() {
            forest = m;
        }
    }
    let mut notes = Vec::new();
    if cfg.learners.iter().any(|l| l.kind == LearnerKind::GradientBoostingL2) {
        notes.push(XGB_NOTE.to_string());
    }
    let importances = match forest {
        Some(model) => {
            let x_test = test_set.features.select(&ranking.selected());
            permutation_importance(
                &model,
                &x_test,
                &test_set.target,
                cfg.importance_repeats,
                rng::subseed(cfg.seed, 3),
                exec,
            )?
        }
        None => {
            notes.push("permutation importance skipped: no random-forest model on the A2 set".to_string());
            Vec::new()
        }
    };
    Ok(EvalReport {
        config: cfg.clone(),
        split: SplitSummary {
            seed: split.seed,
            n_train: train_set.n_rows(),
            n_test: test_set.n_rows(),
            prevalence_train: train_set.prevalence(),
            prevalence_test: test_set.prevalence(),
        },
        selections: Selections { a2: ranking, mi, ga, errors },
        blocks,
        importances,
        notes,
    })
}
