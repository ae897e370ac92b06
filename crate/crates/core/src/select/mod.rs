//! Feature subset selection: A2 upper-tail ranking, mutual-information
//! filtering and a genetic-algorithm wrapper.

mod a2;
mod ga;
mod mi;

pub use a2::{rank_a2, FeatureRanking, RankEntry, TIE_RULE};
pub use ga::{cv_logistic_accuracy, ga_search, ga_select, GaOutcome, GaParams, GaState};
pub use mi::{mutual_information, select_mi, MiSelection};

use crate::error::{Error, Result};

pub(crate) fn check_k(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(alloc::format!("k = {k} must lie in [1, {d}]")));
    }
    Ok(())
}
