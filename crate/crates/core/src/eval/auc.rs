use crate::error::{Error, Result};
use crate::rank::midranks;

/// Mann-Whitney AUC with midranks for tied scores.
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::LengthMismatch { left: y_true.len(), right: scores.len() });
    }
    if let Some(&bad) = y_true.iter().find(|&&v| v > 1) {
        return Err(Error::UnexpectedLabel(f64::from(bad)));
    }
    let n1 = y_true.iter().filter(|&&v| v == 1).count();
    let n0 = y_true.len() - n1;
    if n1 == 0 || n0 == 0 {
        return Err(Error::SingleClass("AUC needs both classes present"));
    }
    let ranks = midranks(scores);
    let rank_sum: f64 = ranks.iter().zip(y_true).filter(|(_, &t)| t == 1).map(|(r, _)| r).sum();
    let n1f = n1 as f64;
    Ok((rank_sum - n1f * (n1f + 1.0) / 2.0) / (n1f * n0 as f64))
}
