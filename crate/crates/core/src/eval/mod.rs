//! Classification metrics, permutation importance and the benchmark driver.

mod auc;
mod benchmark;
mod importance;
mod metrics;

pub use auc::roc_auc;
pub use benchmark::{
    run_benchmark, BenchmarkConfig, EvalReport, FeatureSetKind, MetricsBlock, SelectOn, Selections, SplitSummary,
};
pub use importance::{permutation_importance, ImportanceRecord};
pub use metrics::{accuracy, metrics, Metrics};
