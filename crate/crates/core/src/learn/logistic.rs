//! L2-regularized logistic regression by damped Newton iteration.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_training_input, sigmoid, LearnerConfig, LearnerKind, ModelParams, TrainedModel, TrainingMeta};
use crate::data::Frame;
use crate::error::{Error, Result};

/// `J(b, w) = mean_i [softplus(z_i) - y_i z_i] + l2/(2n) * |w|^2` with
/// `z_i = b + w . x_i`. Parameters are laid out as `[b, w_1, .., w_d]`;
/// the intercept is not penalized.
pub struct LogisticObjective<'a> {
    x: &'a Frame,
    y: &'a [u8],
    l2: f64,
}

impl<'a> LogisticObjective<'a> {
    pub fn new(x: &'a Frame, y: &'a [u8], l2: f64) -> Result<Self> {
        check_training_input(x, y)?;
        Ok(LogisticObjective { x, y, l2 })
    }

    pub fn dim(&self) -> usize {
        self.x.n_cols() + 1
    }

    fn scores(&self, beta: &[f64]) -> Vec<f64> {
        let mut z = vec![beta[0]; self.x.n_rows()];
        for (j, col) in self.x.columns().iter().enumerate() {
            let w = beta[j + 1];
            for (zi, xi) in z.iter_mut().zip(col) {
                *zi += w * xi;
            }
        }
        z
    }

    fn penalty_scale(&self) -> f64 {
        self.l2 / self.x.n_rows() as f64
    }

    pub fn value(&self, beta: &[f64]) -> f64 {
        let z = self.scores(beta);
        let ww: f64 = beta[1..].iter().map(|w| w * w).sum();
        super::log_loss_from_scores(&z, self.y) + 0.5 * self.penalty_scale() * ww
    }

    pub fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        let z = self.scores(beta);
        let r: Vec<f64> = z.iter().zip(self.y).map(|(&zi, &yi)| sigmoid(zi) - f64::from(yi)).collect();
        self.gradient_from_residuals(beta, &r)
    }

    fn gradient_from_residuals(&self, beta: &[f64], r: &[f64]) -> Vec<f64> {
        let n = self.x.n_rows() as f64;
        let lam = self.penalty_scale();
        let mut g = Vec::with_capacity(self.dim());
        g.push(r.iter().sum::<f64>() / n);
        for (j, col) in self.x.columns().iter().enumerate() {
            let s: f64 = col.iter().zip(r).map(|(x, r)| x * r).sum();
            g.push(s / n + lam * beta[j + 1]);
        }
        g
    }

    /// Gradient and Hessian (row-major, `dim x dim`) at `beta`.
    fn gradient_hessian(&self, beta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let z = self.scores(beta);
        let p: Vec<f64> = z.iter().map(|&zi| sigmoid(zi)).collect();
        let r: Vec<f64> = p.iter().zip(self.y).map(|(&pi, &yi)| pi - f64::from(yi)).collect();
        let s: Vec<f64> = p.iter().map(|&pi| pi * (1.0 - pi)).collect();
        let g = self.gradient_from_residuals(beta, &r);
        let d = self.dim();
        let n = self.x.n_rows() as f64;
        let lam = self.penalty_scale();
        let cols = self.x.columns();
        let mut h = vec![0.0; d * d];
        h[0] = s.iter().sum::<f64>() / n;
        for j in 0..d - 1 {
            let sx: Vec<f64> = s.iter().zip(&cols[j]).map(|(a, b)| a * b).collect();
            let v = sx.iter().sum::<f64>() / n;
            h[j + 1] = v;
            h[(j + 1) * d] = v;
            for k in j..d - 1 {
                let v = sx.iter().zip(&cols[k]).map(|(a, b)| a * b).sum::<f64>() / n;
                h[(j + 1) * d + k + 1] = v;
                h[(k + 1) * d + j + 1] = v;
            }
            h[(j + 1) * d + j + 1] += lam;
        }
        (g, h)
    }
}

/// Solves `a x = b` for symmetric positive definite `a` (row-major).
/// Returns `None` when `a` is not numerically positive definite.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let d = b.len();
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * d + k] * l[j * d + k]).sum();
            if i == j {
                let v = a[i * d + i] - s;
                if !(v > 0.0) {
                    return None;
                }
                l[i * d + i] = v.sqrt();
            } else {
                l[i * d + j] = (a[i * d + j] - s) / l[j * d + j];
            }
        }
    }
    let mut y = vec![0.0; d];
    for i in 0..d {
        let s: f64 = (0..i).map(|k| l[i * d + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * d + i];
    }
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let s: f64 = (i + 1..d).map(|k| l[k * d + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * d + i];
    }
    Some(x)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn train_logistic(x: &Frame, y: &[u8], cfg: &LearnerConfig) -> Result<TrainedModel> {
    if cfg.kind != LearnerKind::Logistic {
        return Err(Error::param("train_logistic needs a logistic config"));
    }
    cfg.validate()?;
    let h = &cfg.hyperparameters;
    let obj = LogisticObjective::new(x, y, h.l2)?;
    let d = obj.dim();
    let mut beta = vec![0.0; d];
    let mut value = obj.value(&beta);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < h.max_iterations {
        let (g, mut hess) = obj.gradient_hessian(&beta);
        if norm(&g) < h.tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        // a tiny ridge keeps the intercept row solvable on separable data
        for i in 0..d {
            hess[i * d + i] += 1e-12;
        }
        let step = match cholesky_solve(&hess, &g) {
            Some(s) => s,
            None => g.clone(),
        };
        let slope: f64 = -g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b - t * s).collect();
            let v = obj.value(&cand);
            if v <= value + 1e-4 * t * slope {
                beta = cand;
                value = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no representable descent left along the Newton direction
            converged = norm(&obj.gradient(&beta)) < h.tolerance;
            break;
        }
    }
    if !converged && iterations == h.max_iterations {
        converged = norm(&obj.gradient(&beta)) < h.tolerance;
    }
    Ok(TrainedModel {
        kind: LearnerKind::Logistic,
        config: cfg.clone(),
        feature_names: x.names().to_vec(),
        params: ModelParams::Logistic { intercept: beta[0], weights: beta[1..].to_vec() },
        meta: TrainingMeta { iterations, converged, oob_accuracy: None, loss_history: Vec::new() },
    })
}
