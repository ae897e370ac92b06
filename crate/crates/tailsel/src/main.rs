use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tailsel::commands::{self, Artifact};
use tailsel::config::{Command, ConfigFile, EstimatorArg, Format, Method, RunConfig, SelectOnArg};
use tailsel::Pool;

/// Feature selection by upper-tail dependence with a binary target.
#[derive(Parser)]
#[command(name = "tailsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank features (a2) or select a subset (mi, ga).
    Rank(CommonArgs),
    /// Evaluate all four feature sets with all four classifiers.
    Benchmark(CommonArgs),
    /// Fit the copula for one feature against the target.
    FitCopula {
        #[command(flatten)]
        common: CommonArgs,
        /// Feature column to fit.
        #[arg(long)]
        feature: Option<String>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// CSV file with a header row.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Target column [default: Diabetes_binary, else Diabetes_012].
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Number of features to select [default: 5].
    #[arg(long)]
    k: Option<usize>,
    /// Master seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Copula estimator [default: tau].
    #[arg(long, value_enum)]
    estimator: Option<EstimatorArg>,
    /// Rows visible to feature selection [default: train for benchmark, full otherwise].
    #[arg(long, value_enum)]
    select_on: Option<SelectOnArg>,
    /// Worker threads [default: TAILSEL_THREADS, else all cores].
    #[arg(long)]
    threads: Option<usize>,
    /// Output path [default: standard output].
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format [default: json].
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with any of the above keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn into_file(self, feature: Option<String>) -> (ConfigFile, Option<PathBuf>) {
        let file = ConfigFile {
            input: self.input,
            target: self.target,
            k: self.k,
            method: self.method,
            seed: self.seed,
            estimator: self.estimator,
            select_on: self.select_on,
            output: self.output,
            format: self.format,
            threads: self.threads,
            feature,
        };
        (file, self.config)
    }
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn write_artifacts(artifacts: &[Artifact]) -> anyhow::Result<()> {
    for a in artifacts {
        match &a.path {
            Some(p) => std::fs::write(p, &a.contents).with_context(|| format!("cannot write {}", p.display()))?,
            None => std::io::stdout().write_all(a.contents.as_bytes())?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let (command, (flags, config_path)) = match cli.command {
        Cmd::Rank(a) => (Command::Rank, a.into_file(None)),
        Cmd::Benchmark(a) => (Command::Benchmark, a.into_file(None)),
        Cmd::FitCopula { common, feature } => (Command::FitCopula, common.into_file(feature)),
    };
    let file = match config_path.map(|p| ConfigFile::read(&p)).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let merged = flags.over(file);
    let threads = merged.threads;
    let cfg = match RunConfig::resolve(command, merged) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let run = || -> anyhow::Result<()> {
        commands::validate_paths(&cfg)?;
        let pool = Pool::new(Pool::resolve_threads(threads)?)?;
        let artifacts = match command {
            Command::Rank => commands::cmd_rank(&cfg, &pool)?,
            Command::Benchmark => commands::cmd_benchmark(&cfg, &pool)?,
            Command::FitCopula => commands::cmd_fit_copula(&cfg, &pool)?,
        };
        write_artifacts(&artifacts)
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
