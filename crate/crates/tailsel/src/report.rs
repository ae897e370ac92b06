//! Output documents: versioned JSON, aligned text tables and the
//! importance CSV.

use std::fmt::Write as _;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use tailsel_core::eval::{EvalReport, ImportanceRecord};
use tailsel_core::learn::LearnerKind;
use tailsel_core::select::FeatureRanking;

use crate::config::{Command, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Wall-clock and thread details. Everything outside this section is a
/// function of the configuration and the data alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub elapsed_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: Command,
    pub config: RunConfig,
    pub result: T,
    pub runtime: Runtime,
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A2Result {
    pub top_k: Vec<String>,
    #[serde(flatten)]
    pub ranking: FeatureRanking,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiResult {
    pub top_k: Vec<String>,
    pub folds: usize,
    /// Mean plug-in MI (nats) per feature, in column order.
    pub mean_mi: Vec<FeatureScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub top_k: Vec<String>,
    pub fitness: f64,
    pub evaluations: usize,
    pub best_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub rows_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<A2Result>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mi: Option<MiResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitCopulaResult {
    pub feature: String,
    pub n: usize,
    pub estimator: tailsel_core::copula::Estimator,
    pub theta_hat: f64,
    pub lambda_u: f64,
    pub tau_hat: f64,
    pub clamped: bool,
    pub theta_max: f64,
    /// Pseudo-log-likelihood at `theta_hat`.
    pub log_likelihood: f64,
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.digits$}"))
}

pub fn rank_text(r: &RankResult) -> String {
    let mut out = String::new();
    if let Some(a2) = &r.a2 {
        let _ = writeln!(out, "A2 upper-tail ranking ({} rows, top {})", r.rows_used, a2.ranking.k);
        let w = a2.ranking.entries.iter().map(|e| e.name.len()).max().unwrap_or(7).max(7);
        let _ = writeln!(out, "{:>4}  {:<w$}  {:>10}  {:>10}  {:>10}  {}", "rank", "feature", "theta", "lambda_u", "tau", "note");
        for (i, e) in a2.ranking.entries.iter().enumerate() {
            let note = match (&e.error, e.clamped) {
                (Some(err), _) => err.clone(),
                (None, true) => "clamped".to_owned(),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "{:>4}  {:<w$}  {:>10}  {:>10}  {:>10}  {}",
                i + 1,
                e.name,
                opt(e.theta_hat, 6),
                opt(e.lambda_u, 6),
                opt(e.tau_hat, 6),
                note
            );
        }
        let _ = writeln!(out, "ties: {}", a2.ranking.tie_rule);
    }
    if let Some(mi) = &r.mi {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "MI selection ({}-fold mean, nats): {}", mi.folds, mi.top_k.join(", "));
        let mut scores = mi.mean_mi.clone();
        scores.sort_by(|a, b| b.score.total_cmp(&a.score));
        for s in scores {
            let _ = writeln!(out, "  {:<24} {:.6}", s.feature, s.score);
        }
    }
    if let Some(ga) = &r.ga {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "GA selection: {} (CV accuracy {:.4}, {} subsets evaluated)",
            ga.top_k.join(", "),
            ga.fitness,
            ga.evaluations
        );
    }
    out
}

pub fn rank_csv(r: &RankResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "rank", "feature", "score"])?;
    if let Some(a2) = &r.a2 {
        for (i, e) in a2.ranking.entries.iter().enumerate() {
            w.write_record(["a2", &(i + 1).to_string(), &e.name, &opt(e.lambda_u, 12)])?;
        }
    }
    if let Some(mi) = &r.mi {
        let mut scores = mi.mean_mi.clone();
        scores.sort_by(|a, b| b.score.total_cmp(&a.score));
        for (i, s) in scores.iter().enumerate() {
            w.write_record(["mi", &(i + 1).to_string(), &s.feature, &format!("{:.12}", s.score)])?;
        }
    }
    if let Some(ga) = &r.ga {
        for (i, f) in ga.top_k.iter().enumerate() {
            w.write_record(["ga", &(i + 1).to_string(), f, &format!("{:.12}", ga.fitness)])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn benchmark_text(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Performance by feature set and classifier ({} train / {} test rows, split seed {})",
        report.split.n_train, report.split.n_test, report.split.seed
    );
    let _ = writeln!(
        out,
        "{:<11}  {:<5}  {:>8}  {:>9}  {:>8}  {:>8}  {:>8}",
        "Feature set", "Model", "Accuracy", "Precision", "Recall", "F1", "AUC"
    );
    let mut last_set = "";
    for b in &report.blocks {
        let set = if b.feature_set != last_set { b.feature_set.as_str() } else { "" };
        last_set = &b.feature_set;
        let model = if b.kind == LearnerKind::GradientBoostingL2 { format!("{}*", b.model) } else { b.model.clone() };
        match &b.metrics {
            Some(m) => {
                let _ = writeln!(
                    out,
                    "{:<11}  {:<5}  {:>8.4}  {:>9.4}  {:>8.4}  {:>8.4}  {:>8}",
                    set,
                    model,
                    m.accuracy,
                    m.precision_weighted,
                    m.recall_weighted,
                    m.f1_weighted,
                    opt(b.auc, 4)
                );
            }
            None => {
                let _ = writeln!(out, "{:<11}  {:<5}  failed: {}", set, model, b.error.as_deref().unwrap_or("unknown"));
            }
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "* {note}");
    }
    out.push('\n');
    for set in ["A2", "MI", "GA"] {
        if let Some(b) = report.blocks.iter().find(|b| b.feature_set == set) {
            let _ = writeln!(out, "{set} features: {}", b.features.join(", "));
        }
    }
    if !report.importances.is_empty() {
        let _ = writeln!(out, "\nPermutation importance (RF on the A2 set, {} repeats)", report.config.importance_repeats);
        let mut imp: Vec<&ImportanceRecord> = report.importances.iter().collect();
        imp.sort_by(|a, b| b.mean_drop.total_cmp(&a.mean_drop));
        for r in imp {
            let _ = writeln!(out, "  {:<24} {:>9.5} +/- {:.5}", r.feature, r.mean_drop, r.std_drop);
        }
    }
    out
}

/// Two columns, `feature,mean_drop`, in feature order.
pub fn importance_csv(records: &[ImportanceRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["feature", "mean_drop"])?;
    for r in records {
        w.write_record([r.feature.as_str(), &format!("{:.12}", r.mean_drop)])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn fit_text(r: &FitCopulaResult) -> String {
    format!(
        "feature     {}\nrows        {}\nestimator   {:?}\ntheta_hat   {:.6}{}\nlambda_u    {:.6}\ntau_hat     {:.6}\nloglik      {:.6}\n",
        r.feature,
        r.n,
        r.estimator,
        r.theta_hat,
        if r.clamped { " (clamped)" } else { "" },
        r.lambda_u,
        r.tau_hat,
        r.log_likelihood
    )
}

pub fn fit_csv(r: &FitCopulaResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["feature", "n", "theta_hat", "lambda_u", "tau_hat", "clamped", "log_likelihood"])?;
    w.write_record([
        r.feature.clone(),
        r.n.to_string(),
        format!("{:.12}", r.theta_hat),
        format!("{:.12}", r.lambda_u),
        format!("{:.12}", r.tau_hat),
        r.clamped.to_string(),
        format!("{:.12}", r.log_likelihood),
    ])?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
