//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any hard gate fails. Gates 9-11 need the CDC diabetes
//! indicators CSV at `$TAILSEL_CDC_CSV` and report SKIP without it.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde_json::Value;
use tailsel::dataset::{load_binary, write_csv};
use tailsel::Pool;
use tailsel_core::copula::{
    copula_cdf, copula_density, fit_theta_tau, generator, generator_inverse, invert_tau, kendall_tau_model,
    sample_conditional, upper_tail_coefficient, FitOptions, Theta,
};
use tailsel_core::data::{stratified_split, BinaryDataset, Frame, PseudoMatrix};
use tailsel_core::eval::{metrics, roc_auc, run_benchmark, BenchmarkConfig, FeatureSetKind};
use tailsel_core::kendall::{pair_counts, tau_b};
use tailsel_core::learn::{
    sigmoid, train, train_gradient_boosting, LearnerConfig, LearnerKind, LogisticObjective, ModelParams,
};
use tailsel_core::rng;
use tailsel_core::select::{ga_select, mutual_information, rank_a2, select_mi, GaParams};
use tailsel_core::synth::{logistic_signal, majority_of_signs, majority_vote, planted_copy};
use tailsel_core::Sequential;

const THETAS: [f64; 5] = [1.0, 1.5, 2.0, 5.0, 20.0];

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

/// Collects failure messages; a gate passes when none were recorded.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Outcome::new(true, self.notes.join("; "))
        } else {
            let shown: Vec<&String> = self.failures.iter().take(3).collect();
            Outcome::new(false, format!("{} failure(s): {:?}", self.failures.len(), shown))
        }
    }
}

fn th(v: f64) -> Theta {
    Theta::new(v).unwrap()
}

/// Graded midpoint rule: `u = s^2 (3 - 2s)` clusters nodes at both ends of
/// each axis, where the density is singular.
fn density_mass(theta: Theta, n: usize) -> f64 {
    let nodes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let s = (i as f64 + 0.5) / n as f64;
            (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s) / n as f64)
        })
        .collect();
    nodes
        .par_iter()
        .map(|&(u, wu)| nodes.iter().map(|&(v, wv)| wu * wv * copula_density(u, v, theta).unwrap()).sum::<f64>())
        .sum()
}

fn gate1_copula_axioms() -> Outcome {
    let mut c = Checks::default();
    for &t in &THETAS {
        let theta = th(t);
        c.check(generator(1.0, theta).unwrap() == 0.0, || format!("phi(1) != 0 at theta={t}"));
        let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
        let phi: Vec<f64> = grid.iter().map(|&x| generator(x, theta).unwrap()).collect();
        for w in phi.windows(2) {
            c.check(w[1] < w[0], || format!("phi not decreasing at theta={t}"));
        }
        for w in phi.windows(3) {
            let second = w[0] - 2.0 * w[1] + w[2];
            c.check(second >= -1e-12 * w[0].abs().max(1.0), || format!("phi not convex at theta={t}: {second:e}"));
        }
        let mut worst = 0.0f64;
        for i in 0..=2000 {
            // log-spaced from 1e-6 towards 1, mirrored to cover both ends
            let a = 1e-6f64.powf(i as f64 / 2000.0);
            for x in [a.max(1e-6), (1.0 - a).max(1e-6)] {
                let x = x.min(1.0 - 1e-6);
                let back = generator_inverse(generator(x, theta).unwrap(), theta).unwrap();
                worst = worst.max((back - x).abs());
            }
        }
        c.check(worst < 1e-10, || format!("round trip error {worst:e} at theta={t}"));

        let g: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let cdf: Vec<Vec<f64>> = g.iter().map(|&u| g.iter().map(|&v| copula_cdf(u, v, theta).unwrap()).collect()).collect();
        for (i, &u) in g.iter().enumerate() {
            c.check(cdf[i][0] == 0.0 && cdf[0][i] == 0.0, || format!("not grounded at u={u}, theta={t}"));
            c.check((cdf[i][64] - u).abs() < 1e-12 && (cdf[64][i] - u).abs() < 1e-12, || {
                format!("margin off at u={u}, theta={t}")
            });
        }
        let mut min_vol = f64::INFINITY;
        for i in 0..64 {
            for j in 0..64 {
                min_vol = min_vol.min(cdf[i + 1][j + 1] - cdf[i][j + 1] - cdf[i + 1][j] + cdf[i][j]);
            }
        }
        c.check(min_vol >= -1e-12, || format!("negative rectangle volume {min_vol:e} at theta={t}"));
        let mass = density_mass(theta, 2048);
        c.check((mass - 1.0).abs() <= 1e-3, || format!("density mass {mass} at theta={t}"));
        c.note(format!("theta={t}: mass={mass:.6}, round-trip={worst:.1e}"));
    }
    c.finish()
}

fn gate2_tail_limit() -> Outcome {
    let mut c = Checks::default();
    let q: f64 = 1.0 - 1e-6;
    for t in [1.0, 2.0, 5.0] {
        let theta = th(t);
        let joint = copula_cdf(q, q, theta).unwrap();
        let ratio = (1.0 - 2.0 * q + joint) / (1.0 - q);
        let lambda = upper_tail_coefficient(theta).lambda_u;
        c.check((ratio - lambda).abs() <= 1e-3, || format!("theta={t}: ratio {ratio} vs lambda {lambda}"));
        c.note(format!("theta={t}: |ratio-lambda|={:.1e}", (ratio - lambda).abs()));
    }
    let l1 = upper_tail_coefficient(th(1.0)).lambda_u;
    let l2 = upper_tail_coefficient(th(2.0)).lambda_u;
    let exact1 = 2.0 - 2f64.sqrt();
    let exact2 = 2.0 - 2f64.powf(0.25);
    c.check((l1 - exact1).abs() <= 1e-9, || format!("lambda(1)={l1}"));
    c.check((l2 - exact2).abs() <= 1e-9, || format!("lambda(2)={l2}"));
    c.note(format!(
        "lambda(1)={l1:.9} (2-sqrt2; stated 0.585786, diff {:.1e}), lambda(2)={l2:.9} (2-2^(1/4); stated 0.810790, diff {:.1e})",
        (l1 - 0.585786).abs(),
        (l2 - 0.810790).abs()
    ));
    c.finish()
}

fn gate3_estimation() -> Outcome {
    let mut c = Checks::default();
    let opts = FitOptions::default();
    for (i, &t) in [1.5, 2.0, 5.0].iter().enumerate() {
        let tau = kendall_tau_model(th(t)).unwrap();
        let (back, _) = invert_tau(tau, &opts).unwrap();
        c.check((back.value() - t).abs() <= 1e-3, || format!("noiseless theta={t}: {}", back.value()));

        let sample = sample_conditional(th(t), 50_000, 1000 + i as u64);
        let fit = fit_theta_tau(&sample, &opts).unwrap();
        let rel = (fit.theta.value() - t).abs() / t;
        c.check(rel <= 0.10, || format!("sampled n=50000 theta={t}: {}", fit.theta.value()));

        let big = sample_conditional(th(t), 200_000, 2000 + i as u64);
        let emp = big.kendall_tau().unwrap();
        c.check((emp - tau).abs() <= 0.01, || format!("empirical tau {emp} vs model {tau} at theta={t}"));
        c.note(format!("theta={t}: fit n=50k {:.4}, tau n=200k {emp:.4} vs {tau:.4}", fit.theta.value()));
    }
    c.finish()
}

fn brute_counts(x: &[f64], y: &[f64]) -> (u64, u64, u64, i64) {
    let (mut pairs, mut tx, mut ty, mut s) = (0u64, 0u64, 0u64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            pairs += 1;
            let dx = x[i].total_cmp(&x[j]) as i64;
            let dy = y[i].total_cmp(&y[j]) as i64;
            tx += u64::from(dx == 0);
            ty += u64::from(dy == 0);
            s += dx * dy;
        }
    }
    (pairs, tx, ty, s)
}

fn brute_auc(y: &[u8], s: &[f64]) -> f64 {
    let (mut num, mut pairs) = (0.0, 0.0);
    for i in 0..y.len() {
        for j in 0..y.len() {
            if y[i] == 1 && y[j] == 0 {
                pairs += 1.0;
                num += if s[i] > s[j] { 1.0 } else if s[i] == s[j] { 0.5 } else { 0.0 };
            }
        }
    }
    num / pairs
}

fn mi_from_table(counts: &[[u64; 2]]) -> f64 {
    let n: u64 = counts.iter().map(|r| r[0] + r[1]).sum();
    let n = n as f64;
    let col = [counts.iter().map(|r| r[0]).sum::<u64>() as f64, counts.iter().map(|r| r[1]).sum::<u64>() as f64];
    let mut total = 0.0;
    for r in counts {
        let row = (r[0] + r[1]) as f64;
        for k in 0..2 {
            if r[k] > 0 {
                let pxy = r[k] as f64 / n;
                total += pxy * (pxy / ((row / n) * (col[k] / n))).ln();
            }
        }
    }
    total
}

fn expand(counts: &[[u64; 2]]) -> (Vec<f64>, Vec<u8>) {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (level, r) in counts.iter().enumerate() {
        for (k, &cnt) in r.iter().enumerate() {
            for _ in 0..cnt {
                x.push(level as f64);
                y.push(k as u8);
            }
        }
    }
    (x, y)
}

fn gate4_oracles() -> Outcome {
    let mut c = Checks::default();
    let mut r = rng::seeded(4);
    for case in 0..100 {
        let n = r.random_range(2..=500);
        let levels = if case % 2 == 0 { 5 } else { 1000 };
        let x: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..levels))).collect();
        let y: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..levels))).collect();
        let fast = pair_counts(&x, &y).unwrap();
        let (pairs, tx, ty, s) = brute_counts(&x, &y);
        c.check((fast.pairs, fast.tied_x, fast.tied_y, fast.score) == (pairs, tx, ty, s), || {
            format!("pair counts differ on case {case}")
        });
        if let Ok(t) = tau_b(&x, &y) {
            let brute = s as f64 / (((pairs - tx) as f64) * ((pairs - ty) as f64)).sqrt();
            c.check(t == brute, || format!("tau-b {t} vs {brute} on case {case}"));
        }
    }
    let mut auc_cases = 0;
    while auc_cases < 100 {
        let n = r.random_range(2..=300);
        let y: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        if !(y.contains(&0) && y.contains(&1)) {
            continue;
        }
        auc_cases += 1;
        let s: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..20u8)) / 20.0).collect();
        let a = roc_auc(&y, &s).unwrap();
        let b = brute_auc(&y, &s);
        c.check(a == b, || format!("AUC {a} vs {b}"));
    }
    let mut tables = 0;
    for a in 0..4u64 {
        for b in 0..4u64 {
            for d in 0..4u64 {
                for e in 0..4u64 {
                    let t = [[a, b], [d, e]];
                    if a + b + d + e == 0 {
                        continue;
                    }
                    let (x, y) = expand(&t);
                    let got = mutual_information(&x, &y).unwrap();
                    let want = mi_from_table(&t.iter().filter(|r| r[0] + r[1] > 0).copied().collect::<Vec<_>>()).max(0.0);
                    c.check((got - want).abs() <= 1e-12, || format!("MI 2x2 {t:?}: {got} vs {want}"));
                    tables += 1;
                }
            }
        }
    }
    for code in 0..729u64 {
        let mut t = [[0u64; 2]; 3];
        let mut k = code;
        for cell in t.iter_mut().flat_map(|r| r.iter_mut()) {
            *cell = k % 3;
            k /= 3;
        }
        let rows: Vec<[u64; 2]> = t.iter().filter(|r| r[0] + r[1] > 0).copied().collect();
        if rows.is_empty() {
            continue;
        }
        let (x, y) = expand(&t);
        let got = mutual_information(&x, &y).unwrap();
        let want = mi_from_table(&rows).max(0.0);
        c.check((got - want).abs() <= 1e-12, || format!("MI 3x2 {t:?}: {got} vs {want}"));
        tables += 1;
    }
    c.note(format!("100 tau-b cases, 100 AUC cases, {tables} MI tables"));
    c.finish()
}

fn frame(cols: Vec<Vec<f64>>) -> Frame {
    let names = (0..cols.len()).map(|j| format!("x{j}")).collect();
    Frame::new(names, cols).unwrap()
}

fn accuracy_of(pred: &[u8], y: &[u8]) -> f64 {
    pred.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
}

fn gate5_learners() -> Outcome {
    let mut c = Checks::default();
    let mut r = rng::seeded(5);
    let mut worst_fd = 0.0f64;
    for _ in 0..20 {
        let n = r.random_range(10..60);
        let d = r.random_range(1..5);
        let x = frame((0..d).map(|_| (0..n).map(|_| r.random::<f64>() * 4.0 - 2.0).collect()).collect());
        let y: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        let obj = LogisticObjective::new(&x, &y, 1.0).unwrap();
        let beta: Vec<f64> = (0..=d).map(|_| r.random::<f64>() * 2.0 - 1.0).collect();
        let g = obj.gradient(&beta);
        for k in 0..=d {
            let h = 1e-5;
            let (mut bp, mut bm) = (beta.clone(), beta.clone());
            bp[k] += h;
            bm[k] -= h;
            let fd = (obj.value(&bp) - obj.value(&bm)) / (2.0 * h);
            let rel = (fd - g[k]).abs() / g[k].abs().max(1e-3);
            worst_fd = worst_fd.max(rel);
        }
    }
    c.check(worst_fd < 1e-5, || format!("finite-difference rel. error {worst_fd:e}"));

    // gradient at the returned weights
    let data = logistic_signal(400, 3, 2, 2.0, 9).unwrap();
    let m = train(&LearnerConfig::new(LearnerKind::Logistic, 0), &data.features, &data.target, &Sequential).unwrap();
    if let ModelParams::Logistic { intercept, weights } = &m.params {
        let mut beta = vec![*intercept];
        beta.extend(weights);
        let g = LogisticObjective::new(&data.features, &data.target, 1.0).unwrap().gradient(&beta);
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.check(m.meta.converged && norm < 1e-6, || format!("logistic stopped with gradient norm {norm:e}"));
    }

    let mut monotone = 0;
    for seed in 0..20u64 {
        let data = logistic_signal(300, 4, 2, 1.0 + seed as f64 * 0.3, seed).unwrap();
        let kind = if seed % 2 == 0 { LearnerKind::GradientBoosting } else { LearnerKind::GradientBoostingL2 };
        let mut cfg = LearnerConfig::new(kind, seed);
        cfg.hyperparameters.learning_rate = 0.5;
        let model = train_gradient_boosting(&data.features, &data.target, &cfg).unwrap();
        let ok = model.meta.loss_history.windows(2).all(|w| w[1] <= w[0]);
        monotone += usize::from(ok);
        c.check(ok, || format!("boosting loss increased on dataset {seed}"));
    }

    let xs: Vec<f64> = (-50..=50).filter(|&i| i != 0).map(|i| f64::from(i) / 10.0).collect();
    let ys: Vec<u8> = xs.iter().map(|&v| u8::from(v > 0.0)).collect();
    let sep = frame(vec![xs]);
    let m = train(&LearnerConfig::new(LearnerKind::Logistic, 0), &sep, &ys, &Sequential).unwrap();
    let acc = accuracy_of(&m.predict(&sep).unwrap(), &ys);
    c.check(acc == 1.0, || format!("separable logistic accuracy {acc}"));

    let n = 5000;
    let xi = frame(vec![(0..n).map(|_| r.random::<f64>()).collect()]);
    let yi: Vec<u8> = (0..n).map(|_| u8::from(r.random::<f64>() < 0.3)).collect();
    let prev = yi.iter().map(|&v| f64::from(v)).sum::<f64>() / n as f64;
    let m = train(&LearnerConfig::new(LearnerKind::Logistic, 0), &xi, &yi, &Sequential).unwrap();
    let dev = m.predict_proba(&xi).unwrap().iter().map(|p| (p - prev).abs()).fold(0.0, f64::max);
    c.check(dev <= 0.02, || format!("independent target: max |p - prevalence| = {dev}"));

    let thr = |n: usize, seed: u64| {
        let mut g = rng::seeded(seed);
        let x: Vec<f64> = (0..n).map(|_| g.random::<f64>() * 6.0).collect();
        let y: Vec<u8> = x.iter().map(|&v| u8::from(v > 3.0)).collect();
        (frame(vec![x]), y)
    };
    let (xt, yt) = thr(1000, 1);
    let (xh, yh) = thr(1000, 2);
    let rf = train(&LearnerConfig::new(LearnerKind::RandomForest, 3), &xt, &yt, &Sequential).unwrap();
    let acc = accuracy_of(&rf.predict(&xh).unwrap(), &yh);
    c.check(acc >= 0.95, || format!("forest threshold accuracy {acc}"));
    let proba = rf.predict_proba(&xh).unwrap();
    c.check(proba.iter().all(|p| ((p * 100.0) - (p * 100.0).round()).abs() < 1e-9), || "votes not multiples of 1/trees".into());
    let rf2 = train(&LearnerConfig::new(LearnerKind::RandomForest, 3), &xt, &yt, &Sequential).unwrap();
    c.check(rf2.predict_proba(&xh).unwrap() == proba, || "forest not deterministic".into());
    let pool = Pool::new(Some(4)).unwrap();
    let rf3 = train(&LearnerConfig::new(LearnerKind::RandomForest, 3), &xt, &yt, &pool).unwrap();
    c.check(rf3 == rf, || "forest differs across thread counts".into());

    let xor = majority_vote(400, 2, 1, 0.0, 7).unwrap();
    let a = xor.features.column(0).to_vec();
    let b = xor.features.column(1).to_vec();
    let yx: Vec<u8> = a.iter().zip(&b).map(|(p, q)| u8::from(p != q)).collect();
    let fx = frame(vec![a, b]);
    for kind in [LearnerKind::GradientBoosting, LearnerKind::GradientBoostingL2] {
        let m = train(&LearnerConfig::new(kind, 1), &fx, &yx, &Sequential).unwrap();
        let acc = accuracy_of(&m.predict(&fx).unwrap(), &yx);
        c.check(acc >= 0.99, || format!("{kind:?} XOR accuracy {acc}"));
    }
    let mut zero = LearnerConfig::new(LearnerKind::GradientBoosting, 1);
    zero.hyperparameters.trees = 0;
    let m = train(&zero, &fx, &yx, &Sequential).unwrap();
    let rate = yx.iter().map(|&v| f64::from(v)).sum::<f64>() / yx.len() as f64;
    c.check(m.predict_proba(&fx).unwrap().iter().all(|p| (p - rate).abs() < 1e-12), || "zero trees".into());
    let z = sigmoid(0.0);
    c.check(z == 0.5, || "sigmoid(0)".into());

    let data = logistic_signal(5000, 6, 3, 2.5, 21).unwrap();
    let split = stratified_split(&data, 0.2, 1).unwrap();
    let (tr, te) = (data.take_rows(&split.train_rows), data.take_rows(&split.test_rows));
    let rf = train(&LearnerConfig::new(LearnerKind::RandomForest, 3), &tr.features, &tr.target, &Sequential).unwrap();
    let held = accuracy_of(&rf.predict(&te.features).unwrap(), &te.target);
    let oob = rf.meta.oob_accuracy.unwrap();
    c.check((oob - held).abs() <= 0.05, || format!("OOB {oob} vs held-out {held}"));

    c.note(format!(
        "max FD rel. err {worst_fd:.1e}; boosting monotone on {monotone}/20; OOB {oob:.3} vs held-out {held:.3}"
    ));
    c.finish()
}

fn gate6_selectors() -> Outcome {
    let mut c = Checks::default();
    let opts = FitOptions::default();
    for seed in 0..20u64 {
        let planted = (seed % 5) as usize;
        let near = planted_copy(1000, 5, planted, 0.3, 1e-3, seed).unwrap();
        let pm = PseudoMatrix::from_dataset(&near, &Sequential);
        let ranking = rank_a2(&pm, 1, tailsel_core::copula::Estimator::TauInversion, &opts, &Sequential).unwrap();
        c.check(ranking.selected() == vec![planted], || format!("A2 seed {seed}: {:?}", ranking.selected()));
        let copy = planted_copy(1000, 5, planted, 0.3, 0.0, seed).unwrap();
        let mi = select_mi(&copy, 1, 5, seed, &Sequential).unwrap();
        c.check(mi.selected == vec![planted], || format!("MI seed {seed}: {:?}", mi.selected));
    }
    let pool = Pool::new(None).unwrap();
    let hits: Vec<usize> = (0..20u64)
        .map(|seed| {
            let data = majority_of_signs(2000, 10, 5, 1000 + seed).unwrap();
            let out = ga_select(&data, &GaParams::default(), seed, &pool).unwrap();
            out.selected.iter().filter(|&&j| j < 5).count()
        })
        .collect();
    let good = hits.iter().filter(|&&h| h >= 4).count();
    c.check(good >= 18, || format!("GA recovered >= 4/5 in only {good}/20 seeds: {hits:?}"));
    c.note(format!("A2 and MI first on 20/20 seeds; GA >= 4/5 planted in {good}/20 seeds (d=10, n=2000)"));
    c.finish()
}

fn gate7_metrics() -> Outcome {
    let mut c = Checks::default();
    let mut r = rng::seeded(7);
    for _ in 0..1000 {
        let n = r.random_range(1..200);
        let t: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        let p: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        let m = metrics(&t, &p).unwrap();
        c.check(m.recall_weighted == m.accuracy, || format!("recall {} vs accuracy {}", m.recall_weighted, m.accuracy));
    }
    let n = 100_000;
    let y: Vec<u8> = (0..n).map(|i| u8::from(i >= 86_070)).collect();
    let m = metrics(&y, &vec![0; n]).unwrap();
    let p = 0.8607;
    c.check((m.accuracy - p).abs() < 1e-12, || format!("accuracy {}", m.accuracy));
    c.check((m.precision_weighted - p * p).abs() < 1e-12, || format!("precision {}", m.precision_weighted));
    c.check(format!("{:.4}", m.precision_weighted) == "0.7408", || format!("rounded precision {}", m.precision_weighted));
    c.note(format!("constant majority at p=0.8607: accuracy {:.4}, weighted precision {:.4}", m.accuracy, m.precision_weighted));
    c.finish()
}

fn strip_runtime(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("runtime");
    v
}

fn gate8_determinism() -> Outcome {
    let mut c = Checks::default();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("data.csv");
    write_csv(&input, &majority_vote(1500, 10, 5, 0.1, 8).unwrap(), "Diabetes_binary").unwrap();
    let input_s = input.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["rank", "--method", "a2"],
        vec!["rank", "--method", "a2", "--estimator", "mle"],
        vec!["rank", "--method", "mi"],
        vec!["rank", "--method", "ga"],
        vec!["rank", "--method", "all", "--format", "text"],
        vec!["rank", "--method", "all", "--select-on", "train", "--format", "csv"],
        vec!["fit-copula", "--feature", "f0"],
        vec!["benchmark"],
    ];
    let mut runs = 0;
    for (ci, args) in commands.iter().enumerate() {
        let mut reference: Option<(Value, Vec<Vec<u8>>)> = None;
        for (ri, threads) in ["1", "3", "8", "8"].iter().enumerate() {
            let run_dir = dir.path().join(format!("c{ci}_r{ri}"));
            std::fs::create_dir(&run_dir).unwrap();
            let ext = if args.contains(&"text") { "txt" } else if args.contains(&"csv") { "csv" } else { "json" };
            // same file name in every run directory, so the echoed config matches
            let out: PathBuf = run_dir.join(format!("out.{ext}")).iter().collect();
            let status = Command::new(env!("CARGO_BIN_EXE_tailsel"))
                .args(args)
                .args(["--input", input_s, "--threads", threads])
                .env_remove("TAILSEL_THREADS")
                .current_dir(&run_dir)
                .args(["--output", out.file_name().unwrap().to_str().unwrap()])
                .status()
                .unwrap();
            runs += 1;
            c.check(status.success(), || format!("{args:?} failed"));
            let files: Vec<PathBuf> = {
                let mut f: Vec<PathBuf> = std::fs::read_dir(&run_dir).unwrap().map(|e| e.unwrap().path()).collect();
                f.sort();
                f
            };
            let json_doc = files
                .iter()
                .find(|p| p.extension().is_some_and(|e| e == "json"))
                .map(|p| strip_runtime(&std::fs::read(p).unwrap()))
                .unwrap_or(Value::Null);
            let others: Vec<Vec<u8>> = files
                .iter()
                .filter(|p| !p.extension().is_some_and(|e| e == "json"))
                .map(|p| std::fs::read(p).unwrap())
                .collect();
            match &reference {
                None => reference = Some((json_doc, others)),
                Some((j, o)) => {
                    c.check(*j == json_doc, || format!("{args:?} JSON differs with {threads} threads"));
                    c.check(*o == others, || format!("{args:?} text/CSV differs with {threads} threads"));
                }
            }
        }
    }
    c.note(format!("{} commands x 4 runs (1, 3, 8, 8 threads) = {runs} invocations identical", commands.len()));
    c.finish()
}

const A2_REFERENCE: [&str; 5] = ["GenHlth", "HighBP", "BMI", "DiffWalk", "HighChol"];
const MI_REFERENCE: [&str; 5] = ["HighBP", "GenHlth", "AnyHealthcare", "PhysActivity", "CholCheck"];

fn cdc_report(path: &Path) -> Result<tailsel_core::eval::EvalReport, String> {
    let data: BinaryDataset = load_binary(path, None).map_err(|e| format!("{e:#}"))?;
    let pool = Pool::new(None).map_err(|e| e.to_string())?;
    run_benchmark(&data, &BenchmarkConfig::new(42), &pool).map_err(|e| e.to_string())
}

fn overlap(got: &[String], want: &[&str]) -> usize {
    let want: BTreeSet<&str> = want.iter().copied().collect();
    got.iter().filter(|g| want.contains(g.as_str())).count()
}

fn soft_gates(report: &tailsel_core::eval::EvalReport) -> Vec<(u32, &'static str, Outcome)> {
    let mut out = Vec::new();
    let cell = |set, kind| report.block(set, kind).and_then(|b| Some((b.metrics?.accuracy, b.auc?)));
    let mut c = Checks::default();
    for (set, acc_t, auc_t) in [(FeatureSetKind::A2, 0.8636, 0.8013), (FeatureSetKind::All, 0.8629, 0.8195)] {
        match cell(set, LearnerKind::Logistic) {
            Some((acc, auc)) => {
                c.check((acc - acc_t).abs() <= 0.010, || format!("{} LR accuracy {acc:.4} vs {acc_t}", set.label()));
                c.check((auc - auc_t).abs() <= 0.020, || format!("{} LR AUC {auc:.4} vs {auc_t}", set.label()));
                c.note(format!("{} LR: accuracy {acc:.4} (reference {acc_t}), AUC {auc:.4} (reference {auc_t})", set.label()));
            }
            None => c.check(false, || format!("{} LR cell failed", set.label())),
        }
    }
    out.push((9, "logistic-regression cells vs reference table", c.finish()));

    let mut c = Checks::default();
    let a2 = report.selections.a2.selected_names();
    let a2_hits = overlap(&a2, &A2_REFERENCE);
    c.check(a2_hits >= 3, || format!("A2 overlap {a2_hits}/5: {a2:?}"));
    let mi: Vec<String> = report
        .block(FeatureSetKind::Mi, LearnerKind::Logistic)
        .map(|b| b.features.clone())
        .unwrap_or_default();
    let mi_hits = overlap(&mi, &MI_REFERENCE);
    c.check(mi_hits >= 3, || format!("MI overlap {mi_hits}/5: {mi:?}"));
    c.note(format!("A2 {a2:?} overlap {a2_hits}/5; MI {mi:?} overlap {mi_hits}/5"));
    out.push((10, "reference top-5 overlap", c.finish()));

    let mut c = Checks::default();
    let mut imp: Vec<(&str, f64)> = report.importances.iter().map(|r| (r.feature.as_str(), r.mean_drop)).collect();
    imp.sort_by(|a, b| b.1.total_cmp(&a.1));
    let top: BTreeSet<&str> = imp.iter().take(2).map(|p| p.0).collect();
    c.check(top == BTreeSet::from(["BMI", "GenHlth"]), || format!("top two drops {imp:?}"));
    c.note(format!("mean drops {imp:?}"));
    out.push((11, "permutation importance ordering", c.finish()));
    out
}

fn main() {
    let start = Instant::now();
    let hard: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "copula axiom suite", gate1_copula_axioms),
        (2, "tail-limit consistency", gate2_tail_limit),
        (3, "estimation round trip", gate3_estimation),
        (4, "oracle equivalence", gate4_oracles),
        (5, "learner checks", gate5_learners),
        (6, "selector recovery", gate6_selectors),
        (7, "metric identities", gate7_metrics),
        (8, "determinism across runs and thread counts", gate8_determinism),
    ];
    let mut failed = 0;
    for (id, name, gate) in hard {
        let t = Instant::now();
        let o = gate();
        failed += usize::from(!o.ok);
        println!(
            "[{}] criterion {id}: {name} ({:.1}s) {}",
            if o.ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    match std::env::var_os("TAILSEL_CDC_CSV") {
        None => {
            for (id, name) in [
                (9, "logistic-regression cells vs reference table"),
                (10, "reference top-5 overlap"),
                (11, "permutation importance ordering"),
            ] {
                println!("[SKIP] criterion {id}: {name} (soft; set TAILSEL_CDC_CSV to the CDC CSV to run)");
            }
        }
        Some(path) => match cdc_report(Path::new(&path)) {
            Ok(report) => {
                for (id, name, o) in soft_gates(&report) {
                    println!("[{}] criterion {id}: {name} (soft) {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
                }
            }
            Err(e) => println!("[FAIL] criteria 9-11 (soft): cannot run on {}: {e}", PathBuf::from(path).display()),
        },
    }
    println!("acceptance: {} hard gate(s) failed, {:.1}s total", failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
