use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary metrics with class-prevalence weighted averaging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision_weighted: f64,
    pub recall_weighted: f64,
    pub f1_weighted: f64,
}

fn check(y_true: &[u8], y_pred: &[u8]) -> Result<()> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch { left: y_true.len(), right: y_pred.len() });
    }
    if y_true.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if let Some(&bad) = y_true.iter().chain(y_pred).find(|&&v| v > 1) {
        return Err(Error::UnexpectedLabel(f64::from(bad)));
    }
    Ok(())
}

pub fn accuracy(y_true: &[u8], y_pred: &[u8]) -> Result<f64> {
    check(y_true, y_pred)?;
    let hits = y_true.iter().zip(y_pred).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / y_true.len() as f64)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class precision, recall and F1 (zero when the denominator is zero),
/// averaged with weights equal to each class's share of `y_true`.
pub fn metrics(y_true: &[u8], y_pred: &[u8]) -> Result<Metrics> {
    check(y_true, y_pred)?;
    // confusion[t][p]
    let mut confusion = [[0u64; 2]; 2];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        confusion[usize::from(t)][usize::from(p)] += 1;
    }
    let n = y_true.len() as f64;
    // weighted sums of support_c * metric_c; for recall that product is the hit count
    let (mut precision_sum, mut recall_sum, mut f1_sum) = (0.0, 0.0, 0.0);
    for c in 0..2 {
        let support = confusion[c][0] + confusion[c][1];
        let predicted = confusion[0][c] + confusion[1][c];
        let hit = confusion[c][c];
        let precision = ratio(hit, predicted);
        let recall = ratio(hit, support);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        precision_sum += support as f64 * precision;
        recall_sum += hit as f64;
        f1_sum += support as f64 * f1;
    }
    let out = Metrics {
        accuracy: (confusion[0][0] + confusion[1][1]) as f64 / n,
        precision_weighted: precision_sum / n,
        recall_weighted: recall_sum / n,
        f1_weighted: f1_sum / n,
    };
    Ok(out)
}
