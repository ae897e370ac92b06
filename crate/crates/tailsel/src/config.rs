//! Effective run configuration: defaults, then an optional JSON file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tailsel_core::copula::Estimator;
use tailsel_core::eval::SelectOn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    A2,
    Mi,
    Ga,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorArg {
    Tau,
    Mle,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Tau => Estimator::TauInversion,
            EstimatorArg::Mle => Estimator::PseudoMle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SelectOnArg {
    Train,
    Full,
}

impl From<SelectOnArg> for SelectOn {
    fn from(s: SelectOnArg) -> Self {
        match s {
            SelectOnArg::Train => SelectOn::Train,
            SelectOnArg::Full => SelectOn::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Rank,
    Benchmark,
    FitCopula,
}

/// Keys accepted by `--config`. Every field is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub input: Option<PathBuf>,
    pub target: Option<String>,
    pub k: Option<usize>,
    pub method: Option<Method>,
    pub seed: Option<u64>,
    pub estimator: Option<EstimatorArg>,
    pub select_on: Option<SelectOnArg>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub feature: Option<String>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Fields set in `self` replace those of `base`.
    pub fn over(self, base: ConfigFile) -> ConfigFile {
        ConfigFile {
            input: self.input.or(base.input),
            target: self.target.or(base.target),
            k: self.k.or(base.k),
            method: self.method.or(base.method),
            seed: self.seed.or(base.seed),
            estimator: self.estimator.or(base.estimator),
            select_on: self.select_on.or(base.select_on),
            output: self.output.or(base.output),
            format: self.format.or(base.format),
            threads: self.threads.or(base.threads),
            feature: self.feature.or(base.feature),
        }
    }
}

/// The configuration a command actually ran with, echoed into its output.
/// Thread count is left out on purpose: it is reported under `runtime`
/// because results do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    /// `None` means the first of the default target names present.
    pub target: Option<String>,
    pub k: usize,
    pub method: Method,
    pub seed: u64,
    pub estimator: EstimatorArg,
    pub select_on: SelectOnArg,
    pub output: Option<PathBuf>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feature: Option<String>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_K: usize = 5;

/// A problem with the invocation rather than with the data.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl RunConfig {
    pub fn resolve(command: Command, c: ConfigFile) -> std::result::Result<RunConfig, UsageError> {
        let input = c.input.ok_or_else(|| UsageError("--input is required".into()))?;
        let k = c.k.unwrap_or(DEFAULT_K);
        if k == 0 {
            return Err(UsageError("--k must be at least 1".into()));
        }
        let method = c.method.unwrap_or(match command {
            Command::Benchmark => Method::All,
            _ => Method::A2,
        });
        if command == Command::Benchmark && method != Method::All {
            return Err(UsageError("benchmark always runs every method; drop --method or use --method all".into()));
        }
        if command == Command::FitCopula && c.feature.is_none() {
            return Err(UsageError("fit-copula needs --feature".into()));
        }
        // a standalone ranking uses every row unless asked otherwise
        let select_on = c.select_on.unwrap_or(match command {
            Command::Benchmark => SelectOnArg::Train,
            _ => SelectOnArg::Full,
        });
        Ok(RunConfig {
            command,
            input,
            target: c.target,
            k,
            method,
            seed: c.seed.unwrap_or(DEFAULT_SEED),
            estimator: c.estimator.unwrap_or(EstimatorArg::Tau),
            select_on,
            output: c.output,
            format: c.format.unwrap_or(Format::Json),
            feature: c.feature,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ConfigFile { k: Some(3), seed: Some(7), input: Some("a.csv".into()), ..Default::default() };
        let flags = ConfigFile { seed: Some(9), ..Default::default() };
        let rc = RunConfig::resolve(Command::Rank, flags.over(file)).unwrap();
        assert_eq!((rc.k, rc.seed, rc.input), (3, 9, PathBuf::from("a.csv")));
        assert_eq!(rc.select_on, SelectOnArg::Full);
    }

    #[test]
    fn usage_errors() {
        assert!(RunConfig::resolve(Command::Rank, ConfigFile::default()).is_err());
        let c = ConfigFile { input: Some("a".into()), k: Some(0), ..Default::default() };
        assert!(RunConfig::resolve(Command::Rank, c).is_err());
        let c = ConfigFile { input: Some("a".into()), ..Default::default() };
        assert!(RunConfig::resolve(Command::FitCopula, c).is_err());
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"kk": 1}"#).is_err());
        let c: ConfigFile = serde_json::from_str(r#"{"k": 4, "method": "mi", "select_on": "train"}"#).unwrap();
        assert_eq!(c.method, Some(Method::Mi));
    }
}
