//! The A2 Archimedean copula.
//!
//! Generator `phi(t) = (t^(-1/theta) + t^(1/theta) - 2)^theta`, `theta >= 1`.
//! Every quantity is evaluated through `y = -ln(t) / (2 theta)`, where the
//! generator becomes `(2 sinh y)^(2 theta)` and its inverse
//! `exp(-2 theta asinh(s^(1/(2 theta)) / 2))`. Both forms are free of the
//! cancellation that the textbook expressions suffer near `t = 1`.

mod estimate;
mod sample;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use estimate::{
    fit_theta_mle, fit_theta_tau, invert_tau, kendall_tau_model, kendall_tau_model_with_tol,
    log_likelihood, Estimator, FitOptions, PseudoSample, ThetaEstimate, DEFAULT_THETA_MAX,
};
pub use sample::sample_conditional;

/// Density arguments are clipped into `[DENSITY_CLIP, 1 - DENSITY_CLIP]`.
pub const DENSITY_CLIP: f64 = 1e-12;

/// Dependence parameter of the A2 family.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Theta(f64);

impl Theta {
    pub const ONE: Theta = Theta(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 1.0 {
            Ok(Theta(value))
        } else {
            Err(Error::domain(alloc::format!("theta must be finite and >= 1, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Theta {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Theta::new(value)
    }
}

impl From<Theta> for f64 {
    fn from(t: Theta) -> f64 {
        t.0
    }
}

/// Upper-tail dependence coefficient `lambda_U = 2 - 2^(1/(2 theta))`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct TailCoefficient {
    pub lambda_u: f64,
}

pub fn upper_tail_coefficient(theta: Theta) -> TailCoefficient {
    TailCoefficient { lambda_u: 2.0 - (0.5 / theta.0).exp2() }
}

/// `ln(2 sinh y)` for `y >= 0`; `-inf` at zero.
#[inline]
fn ln_2sinh(y: f64) -> f64 {
    y + (-(-2.0 * y).exp_m1()).ln()
}

/// Per-point quantities shared by the generator and its derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GenPoint {
    /// `-ln t`
    neg_ln_t: f64,
    /// `-ln t / (2 theta)`
    y: f64,
    ln_phi: f64,
}

impl GenPoint {
    #[inline]
    pub(crate) fn from_neg_ln(neg_ln_t: f64, theta: f64) -> Self {
        let y = neg_ln_t / (2.0 * theta);
        GenPoint { neg_ln_t, y, ln_phi: 2.0 * theta * ln_2sinh(y) }
    }

    #[inline]
    pub(crate) fn from_t(t: f64, theta: f64) -> Self {
        Self::from_neg_ln(-t.ln(), theta)
    }

    /// Point whose generator value is `exp(ln_s)`.
    #[inline]
    pub(crate) fn from_ln_phi(ln_s: f64, theta: f64) -> Self {
        let y = ((ln_s / (2.0 * theta)).exp() * 0.5).asinh();
        GenPoint { neg_ln_t: 2.0 * theta * y, y, ln_phi: ln_s }
    }

    /// `ln |phi'(t)|`, with `phi'(t) = -phi(t) coth(y) / t`.
    #[inline]
    pub(crate) fn ln_abs_d1(&self) -> f64 {
        self.ln_phi - self.y.tanh().ln() + self.neg_ln_t
    }

    /// `ln phi''(t)`, with
    /// `phi''(t) = phi(t) (1 + (1 - 1/(2 theta)) csch^2 y + coth y) / t^2`.
    #[inline]
    pub(crate) fn ln_d2(&self, theta: f64) -> f64 {
        let s = self.y.sinh();
        let k = 1.0 + (1.0 - 0.5 / theta) / (s * s) + 1.0 / self.y.tanh();
        self.ln_phi + k.ln() + 2.0 * self.neg_ln_t
    }

    pub(crate) fn t(&self) -> f64 {
        (-self.neg_ln_t).exp()
    }
}

#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Generator `phi(t; theta)` on `(0, 1]`.
pub fn generator(t: f64, theta: Theta) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(alloc::format!("generator needs t in (0, 1], got {t}")));
    }
    Ok(GenPoint::from_t(t, theta.0).ln_phi.exp())
}

/// Inverse generator on `[0, inf]`; equals the closed form
/// `[(s^(1/theta) + 2 - sqrt((s^(1/theta) + 2)^2 - 4)) / 2]^theta`.
pub fn generator_inverse(s: f64, theta: Theta) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::domain(alloc::format!("generator inverse needs s >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    Ok(GenPoint::from_ln_phi(s.ln(), theta.0).t())
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("{name} must lie in [0, 1], got {x}")))
    }
}

/// `C(u, v) = phi^-1(phi(u) + phi(v))` on the closed unit square.
pub fn copula_cdf(u: f64, v: f64, theta: Theta) -> Result<f64> {
    check_unit("u", u)?;
    check_unit("v", v)?;
    if u == 0.0 || v == 0.0 {
        return Ok(0.0);
    }
    let (pu, pv) = (GenPoint::from_t(u, theta.0), GenPoint::from_t(v, theta.0));
    let ln_s = log_add_exp(pu.ln_phi, pv.ln_phi);
    if ln_s == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    Ok(GenPoint::from_ln_phi(ln_s, theta.0).t())
}

/// Log-density from `-ln u`, `-ln v` (already clipped).
#[inline]
pub(crate) fn log_density_neg_ln(lu: f64, lv: f64, theta: f64) -> f64 {
    let pu = GenPoint::from_neg_ln(lu, theta);
    let pv = GenPoint::from_neg_ln(lv, theta);
    let pc = GenPoint::from_ln_phi(log_add_exp(pu.ln_phi, pv.ln_phi), theta);
    // c = -phi''(C) phi'(u) phi'(v) / phi'(C)^3, all signs cancel
    pc.ln_d2(theta) + pu.ln_abs_d1() + pv.ln_abs_d1() - 3.0 * pc.ln_abs_d1()
}

#[inline]
pub(crate) fn clip_neg_ln(x: f64) -> f64 {
    -x.max(DENSITY_CLIP).min(1.0 - DENSITY_CLIP).ln()
}

/// `ln c(u, v; theta)` for `u, v` in the open unit square.
pub fn copula_log_density(u: f64, v: f64, theta: Theta) -> Result<f64> {
    if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
        return Err(Error::domain(alloc::format!(
            "density needs (u, v) inside the open unit square, got ({u}, {v})"
        )));
    }
    Ok(log_density_neg_ln(clip_neg_ln(u), clip_neg_ln(v), theta.0))
}

pub fn copula_density(u: f64, v: f64, theta: Theta) -> Result<f64> {
    copula_log_density(u, v, theta).map(f64::exp)
}

/// Conditional distribution `P(V <= v | U = u) = dC/du`.
pub fn conditional_cdf(v: f64, u: f64, theta: Theta) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(alloc::format!("conditioning value must lie in (0, 1), got {u}")));
    }
    check_unit("v", v)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    let pu = GenPoint::from_t(u, theta.0);
    Ok(conditional_from(&pu, v, theta.0))
}

#[inline]
pub(crate) fn conditional_from(pu: &GenPoint, v: f64, theta: f64) -> f64 {
    let pv = GenPoint::from_t(v, theta);
    let pc = GenPoint::from_ln_phi(log_add_exp(pu.ln_phi, pv.ln_phi), theta);
    (pu.ln_abs_d1() - pc.ln_abs_d1()).exp().min(1.0)
}
