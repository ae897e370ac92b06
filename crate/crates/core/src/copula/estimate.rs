//! Estimating theta from pseudo-observations: Kendall's tau inversion and
//! pseudo maximum likelihood.

#[allow(unused_imports)] // inherent f64 methods take over when std is linked
use num_traits::Float;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{clip_neg_ln, log_density_neg_ln, Theta};
use crate::numeric::{bisect_increasing, brent_maximize, integrate};
use crate::{kendall, Error, Result};

pub const DEFAULT_THETA_MAX: f64 = 50.0;
const MIN_FIT_SAMPLE: usize = 10;
const TAU_QUAD_TOL: f64 = 1e-8;

/// Paired pseudo-observations, every value strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSample {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl PseudoSample {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
        }
        if let Some(bad) = u.iter().chain(&v).find(|x| !(**x > 0.0 && **x < 1.0)) {
            return Err(Error::domain(alloc::format!(
                "pseudo-observations must lie in (0, 1), found {bad}"
            )));
        }
        Ok(PseudoSample { u, v })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Tie-adjusted Kendall's tau of the pairs.
    pub fn kendall_tau(&self) -> Result<f64> {
        kendall::tau_b(&self.u, &self.v)
    }

    fn require_fit_size(&self) -> Result<()> {
        if self.len() < MIN_FIT_SAMPLE {
            Err(Error::SampleTooSmall { need: MIN_FIT_SAMPLE, got: self.len() })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    TauInversion,
    PseudoMle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub theta_max: f64,
    /// Bracket width at which tau inversion stops.
    pub theta_tol: f64,
    /// Relative tolerance of the likelihood search.
    pub mle_rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { theta_max: DEFAULT_THETA_MAX, theta_tol: 1e-6, mle_rel_tol: 1e-6 }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if !(self.theta_max.is_finite() && self.theta_max > 1.0) {
            return Err(Error::param("theta_max must be finite and > 1"));
        }
        if !(self.theta_tol > 0.0 && self.mle_rel_tol > 0.0) {
            return Err(Error::param("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub theta: Theta,
    pub method: Estimator,
    pub tau_hat: f64,
    pub log_likelihood: Option<f64>,
    /// The search ended on a bound of `[1, theta_max]`.
    pub clamped: bool,
}

/// Model Kendall's tau, `1 + 4 int_0^1 phi(t)/phi'(t) dt`.
///
/// For A2 the ratio simplifies to `phi/phi' = -t tanh(-ln t / (2 theta))`,
/// which is bounded and vanishes at both ends of the interval.
pub fn kendall_tau_model(theta: Theta) -> Result<f64> {
    kendall_tau_model_with_tol(theta, TAU_QUAD_TOL)
}

pub fn kendall_tau_model_with_tol(theta: Theta, abs_tol: f64) -> Result<f64> {
    let scale = 0.5 / theta.value();
    let integrand = |t: f64| if t > 0.0 { t * (-t.ln() * scale).tanh() } else { 0.0 };
    let r = integrate(integrand, 0.0, 1.0, abs_tol)?;
    Ok(1.0 - 4.0 * r.value)
}

/// Solves `kendall_tau_model(theta) = tau` on `[1, theta_max]`.
/// Returns the root and whether it was clamped to a bound.
pub fn invert_tau(tau: f64, opts: &FitOptions) -> Result<(Theta, bool)> {
    opts.validate()?;
    if tau.is_nan() {
        return Err(Error::domain("tau is NaN"));
    }
    let low = kendall_tau_model(Theta::ONE)?;
    if tau <= low {
        return Ok((Theta::ONE, true));
    }
    let high = kendall_tau_model(Theta::new(opts.theta_max)?)?;
    if tau >= high {
        return Ok((Theta::new(opts.theta_max)?, true));
    }
    let mut failure = None;
    let root = bisect_increasing(
        |th| match kendall_tau_model(Theta(th)) {
            Ok(t) => t - tau,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        1.0,
        opts.theta_max,
        opts.theta_tol,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok((Theta::new(root)?, false)),
    }
}

/// Tau-inversion estimate: empirical tau-b, then the model inverse.
pub fn fit_theta_tau(sample: &PseudoSample, opts: &FitOptions) -> Result<ThetaEstimate> {
    sample.require_fit_size()?;
    let tau_hat = sample.kendall_tau()?;
    let (theta, clamped) = invert_tau(tau_hat, opts)?;
    Ok(ThetaEstimate { theta, method: Estimator::TauInversion, tau_hat, log_likelihood: None, clamped })
}

fn neg_logs(sample: &PseudoSample) -> (Vec<f64>, Vec<f64>) {
    (
        sample.u.iter().map(|&x| clip_neg_ln(x)).collect(),
        sample.v.iter().map(|&x| clip_neg_ln(x)).collect(),
    )
}

fn ll_from_neg_logs(lu: &[f64], lv: &[f64], theta: f64) -> f64 {
    lu.iter().zip(lv).map(|(&a, &b)| log_density_neg_ln(a, b, theta)).sum()
}

/// Pseudo-log-likelihood `sum_i ln c(u_i, v_i; theta)`.
pub fn log_likelihood(sample: &PseudoSample, theta: Theta) -> f64 {
    let (lu, lv) = neg_logs(sample);
    ll_from_neg_logs(&lu, &lv, theta.value())
}

/// Pseudo maximum likelihood over `[1, theta_max]` by Brent's method,
/// starting from `init` (normally the tau-inversion estimate).
pub fn fit_theta_mle(sample: &PseudoSample, init: Theta, opts: &FitOptions) -> Result<ThetaEstimate> {
    opts.validate()?;
    sample.require_fit_size()?;
    let tau_hat = sample.kendall_tau()?;
    let (lu, lv) = neg_logs(sample);
    let best = brent_maximize(
        |th| ll_from_neg_logs(&lu, &lv, th),
        1.0,
        opts.theta_max,
        init.value(),
        opts.mle_rel_tol,
        200,
    )?;
    let edge = 1e-6 * opts.theta_max;
    let clamped = best.x - 1.0 <= edge || opts.theta_max - best.x <= edge;
    Ok(ThetaEstimate {
        theta: Theta::new(best.x)?,
        method: Estimator::PseudoMle,
        tau_hat,
        log_likelihood: Some(best.value),
        clamped,
    })
}
