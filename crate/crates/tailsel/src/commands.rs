//! The three subcommands. Each returns the documents it produced; writing
//! them is left to the caller.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use log::info;
use tailsel_core::copula::{
    fit_theta_mle, fit_theta_tau, log_likelihood, upper_tail_coefficient, Estimator, FitOptions, PseudoSample,
};
use tailsel_core::data::{stratified_split, BinaryDataset, PseudoMatrix};
use tailsel_core::eval::{run_benchmark, BenchmarkConfig};
use tailsel_core::rank::pseudo_observations;
use tailsel_core::rng;
use tailsel_core::select::{ga_select, rank_a2, select_mi, GaParams};
use tailsel_core::Error as CoreError;

use crate::config::{Format, Method, RunConfig, SelectOnArg};
use crate::dataset::load_binary;
use crate::parallel::Pool;
use crate::report::{self, A2Result, Envelope, FeatureScore, FitCopulaResult, GaResult, MiResult, RankResult, Runtime};

/// Test fraction of the split used by `--select-on train`.
pub const TEST_FRACTION: f64 = 0.2;
pub const MI_FOLDS: usize = 5;

/// A document and where it goes (`None` = standard output).
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub contents: String,
}

/// Checks paths before any work starts.
pub fn validate_paths(cfg: &RunConfig) -> Result<()> {
    if !cfg.input.is_file() {
        bail!("input file {} does not exist or is not a file", cfg.input.display());
    }
    if let Some(out) = &cfg.output {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            bail!("output directory {} does not exist", parent.display());
        }
    }
    Ok(())
}

fn load(cfg: &RunConfig) -> Result<BinaryDataset> {
    info!("loading {}", cfg.input.display());
    load_binary(&cfg.input, cfg.target.as_deref()).context("loading data")
}

/// Rows that selection may look at.
fn selection_rows(cfg: &RunConfig, data: &BinaryDataset) -> Result<BinaryDataset> {
    Ok(match cfg.select_on {
        SelectOnArg::Full => data.clone(),
        SelectOnArg::Train => {
            let split = stratified_split(data, TEST_FRACTION, cfg.seed)?;
            data.take_rows(&split.train_rows)
        }
    })
}

fn names(data: &BinaryDataset, cols: &[usize]) -> Vec<String> {
    cols.iter().map(|&j| data.features.names()[j].clone()).collect()
}

fn envelope<T>(cfg: &RunConfig, result: T, start: Instant, pool: &Pool) -> Envelope<T> {
    Envelope {
        schema_version: report::SCHEMA_VERSION,
        command: cfg.command,
        config: cfg.clone(),
        result,
        runtime: Runtime { elapsed_seconds: start.elapsed().as_secs_f64(), threads: pool.threads() },
    }
}

pub fn cmd_rank(cfg: &RunConfig, pool: &Pool) -> Result<Vec<Artifact>> {
    let start = Instant::now();
    let data = load(cfg)?;
    let data = selection_rows(cfg, &data).context("splitting rows")?;
    let wants = |m: Method| cfg.method == m || cfg.method == Method::All;
    let mut result = RankResult { rows_used: data.n_rows(), a2: None, mi: None, ga: None };
    if wants(Method::A2) {
        info!("ranking by upper-tail dependence");
        let pseudo = PseudoMatrix::from_dataset(&data, pool);
        let ranking =
            rank_a2(&pseudo, cfg.k, cfg.estimator.into(), &FitOptions::default(), pool).context("A2 ranking")?;
        result.a2 = Some(A2Result { top_k: ranking.selected_names(), ranking });
    }
    if wants(Method::Mi) {
        info!("mutual-information selection");
        let s = select_mi(&data, cfg.k, MI_FOLDS, rng::subseed(cfg.seed, 1), pool).context("MI selection")?;
        let mean_mi = data
            .features
            .names()
            .iter()
            .zip(&s.mean_mi)
            .map(|(n, &score)| FeatureScore { feature: n.clone(), score })
            .collect();
        result.mi = Some(MiResult { top_k: names(&data, &s.selected), folds: s.folds, mean_mi });
    }
    if wants(Method::Ga) {
        info!("genetic-algorithm selection");
        let params = GaParams { k: cfg.k, ..GaParams::default() };
        let g = ga_select(&data, &params, rng::subseed(cfg.seed, 2), pool).context("GA selection")?;
        result.ga = Some(GaResult {
            top_k: names(&data, &g.selected),
            fitness: g.fitness,
            evaluations: g.evaluations,
            best_history: g.best_history,
        });
    }
    let contents = match cfg.format {
        Format::Json => report::to_json(&envelope(cfg, &result, start, pool))?,
        Format::Text => report::rank_text(&result),
        Format::Csv => report::rank_csv(&result)?,
    };
    Ok(vec![Artifact { path: cfg.output.clone(), contents }])
}

pub fn benchmark_config(cfg: &RunConfig) -> BenchmarkConfig {
    let mut b = BenchmarkConfig::new(cfg.seed);
    b.k = cfg.k;
    b.estimator = cfg.estimator.into();
    b.select_on = cfg.select_on.into();
    b.test_fraction = TEST_FRACTION;
    b.mi_folds = MI_FOLDS;
    b
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Runs the benchmark. With `--output`, the chosen format goes to that path
/// and the other two documents are written next to it.
pub fn cmd_benchmark(cfg: &RunConfig, pool: &Pool) -> Result<Vec<Artifact>> {
    let start = Instant::now();
    let data = load(cfg)?;
    info!("benchmark on {} rows, {} features", data.n_rows(), data.n_features());
    let report = run_benchmark(&data, &benchmark_config(cfg), pool).context("benchmark")?;
    let json = report::to_json(&envelope(cfg, &report, start, pool))?;
    let text = report::benchmark_text(&report);
    let csv = report::importance_csv(&report.importances)?;
    let (primary, others) = match cfg.format {
        Format::Json => (json, vec![(".txt", text), ("_importance.csv", csv)]),
        Format::Text => (text, vec![(".json", json), ("_importance.csv", csv)]),
        Format::Csv => (csv, vec![(".json", json), (".txt", text)]),
    };
    let mut out = vec![Artifact { path: cfg.output.clone(), contents: primary }];
    if let Some(p) = &cfg.output {
        for (suffix, contents) in others {
            out.push(Artifact { path: Some(sibling(p, suffix)), contents });
        }
    }
    Ok(out)
}

pub fn cmd_fit_copula(cfg: &RunConfig, pool: &Pool) -> Result<Vec<Artifact>> {
    let start = Instant::now();
    let feature = cfg.feature.clone().context("fit-copula needs --feature")?;
    let data = load(cfg)?;
    let j = data.features.index_of(&feature).ok_or_else(|| CoreError::UnknownFeature(feature.clone()))?;
    let data = selection_rows(cfg, &data).context("splitting rows")?;
    let y: Vec<f64> = data.target.iter().map(|&t| f64::from(t)).collect();
    let sample = PseudoSample::new(pseudo_observations(data.features.column(j)), pseudo_observations(&y))?;
    let opts = FitOptions::default();
    let tau_fit = fit_theta_tau(&sample, &opts).context("tau inversion")?;
    let fit = match Estimator::from(cfg.estimator) {
        Estimator::TauInversion => tau_fit,
        Estimator::PseudoMle => fit_theta_mle(&sample, tau_fit.theta, &opts).context("pseudo-likelihood fit")?,
    };
    let result = FitCopulaResult {
        feature,
        n: sample.len(),
        estimator: fit.method,
        theta_hat: fit.theta.value(),
        lambda_u: upper_tail_coefficient(fit.theta).lambda_u,
        tau_hat: fit.tau_hat,
        clamped: fit.clamped,
        theta_max: opts.theta_max,
        log_likelihood: fit.log_likelihood.unwrap_or_else(|| log_likelihood(&sample, fit.theta)),
    };
    let contents = match cfg.format {
        Format::Json => report::to_json(&envelope(cfg, &result, start, pool))?,
        Format::Text => report::fit_text(&result),
        Format::Csv => report::fit_csv(&result)?,
    };
    Ok(vec![Artifact { path: cfg.output.clone(), contents }])
}
