//! Genetic-algorithm wrapper selection over fixed-size feature subsets.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::check_k;
use crate::data::{complement, standardize, stratified_folds, BinaryDataset};
use crate::error::Result;
use crate::exec::Executor;
use crate::learn::{train_logistic, LearnerConfig, LearnerKind};
use crate::rng::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub k: usize,
    pub population: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub tournament: usize,
    pub cv_folds: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams { k: 5, population: 10, generations: 5, mutation_rate: 0.1, tournament: 2, cv_folds: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaState {
    /// Individuals keep gene order; crossover acts on that order.
    pub population: Vec<Vec<usize>>,
    pub generation: usize,
    pub rng_seed: u64,
    /// Keyed by the sorted subset.
    pub fitness_cache: BTreeMap<Vec<usize>, f64>,
}

impl GaState {
    pub fn fitness(&self, individual: &[usize]) -> Option<f64> {
        self.fitness_cache.get(&canonical(individual)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaOutcome {
    /// Best subset seen, sorted by column index.
    pub selected: Vec<usize>,
    pub fitness: f64,
    /// Distinct subsets whose fitness was computed.
    pub evaluations: usize,
    /// Best fitness seen after the initial population and after each generation.
    pub best_history: Vec<f64>,
}

fn canonical(individual: &[usize]) -> Vec<usize> {
    let mut c = individual.to_vec();
    c.sort_unstable();
    c
}

fn sanitize(f: f64) -> f64 {
    if f.is_nan() {
        f64::NEG_INFINITY
    } else {
        f
    }
}

/// Computes fitness for every individual not yet cached. Each distinct
/// subset is evaluated once; evaluation order is the population order.
fn evaluate<F, E>(state: &mut GaState, fitness: &F, exec: &E)
where
    F: Fn(&[usize]) -> f64 + Sync,
    E: Executor,
{
    let mut todo: Vec<Vec<usize>> = Vec::new();
    for ind in &state.population {
        let c = canonical(ind);
        if !state.fitness_cache.contains_key(&c) && !todo.contains(&c) {
            todo.push(c);
        }
    }
    let scores = exec.map_indexed(todo.len(), |i| sanitize(fitness(&todo[i])));
    for (c, s) in todo.into_iter().zip(scores) {
        state.fitness_cache.insert(c, s);
    }
}

fn tournament(state: &GaState, size: usize, r: &mut Rng) -> usize {
    let mut best = r.random_range(0..state.population.len());
    for _ in 1..size {
        let c = r.random_range(0..state.population.len());
        if state.fitness(&state.population[c]) > state.fitness(&state.population[best]) {
            best = c;
        }
    }
    best
}

fn random_unused(members: &[usize], d: usize, r: &mut Rng) -> Option<usize> {
    let unused: Vec<usize> = (0..d).filter(|j| !members.contains(j)).collect();
    (!unused.is_empty()).then(|| unused[r.random_range(0..unused.len())])
}

fn make_child(p1: &[usize], p2: &[usize], d: usize, params: &GaParams, r: &mut Rng) -> Vec<usize> {
    let k = params.k;
    let cut = k.div_ceil(2);
    let mut child: Vec<usize> = Vec::with_capacity(k);
    for &g in p1[..cut].iter().chain(&p2[cut..]) {
        if !child.contains(&g) {
            child.push(g);
        }
    }
    while child.len() < k {
        let g = random_unused(&child, d, r).expect("k <= d");
        child.push(g);
    }
    if r.random::<f64>() < params.mutation_rate {
        if let Some(g) = random_unused(&child, d, r) {
            let pos = r.random_range(0..k);
            child[pos] = g;
        }
    }
    child
}

/// Runs the GA over subsets of `0..d` with a caller-supplied fitness.
pub fn ga_search<F, E>(d: usize, params: &GaParams, seed: u64, fitness: &F, exec: &E) -> Result<(GaOutcome, GaState)>
where
    F: Fn(&[usize]) -> f64 + Sync,
    E: Executor,
{
    check_k(params.k, d)?;
    if params.population == 0 || params.tournament == 0 {
        return Err(crate::Error::param("population and tournament size must be positive"));
    }
    let mut r = rng::seeded(seed);
    let population = (0..params.population).map(|_| sample(&mut r, d, params.k).into_vec()).collect();
    let mut state = GaState { population, generation: 0, rng_seed: seed, fitness_cache: BTreeMap::new() };
    evaluate(&mut state, fitness, exec);

    let mut best: Vec<usize> = Vec::new();
    let mut best_fit = f64::NEG_INFINITY;
    let mut history = Vec::with_capacity(params.generations + 1);
    let mut record = |state: &GaState, best: &mut Vec<usize>, best_fit: &mut f64| {
        for ind in &state.population {
            let f = state.fitness(ind).unwrap_or(f64::NEG_INFINITY);
            if f > *best_fit || best.is_empty() {
                *best_fit = f;
                *best = ind.clone();
            }
        }
        history.push(*best_fit);
    };
    record(&state, &mut best, &mut best_fit);

    for _ in 0..params.generations {
        let mut next = Vec::with_capacity(params.population);
        for _ in 0..params.population {
            let a = tournament(&state, params.tournament, &mut r);
            let b = tournament(&state, params.tournament, &mut r);
            next.push(make_child(&state.population[a], &state.population[b], d, params, &mut r));
        }
        state.population = next;
        state.generation += 1;
        evaluate(&mut state, fitness, exec);
        record(&state, &mut best, &mut best_fit);
    }
    let outcome = GaOutcome {
        selected: canonical(&best),
        fitness: best_fit,
        evaluations: state.fitness_cache.len(),
        best_history: history,
    };
    Ok((outcome, state))
}

/// Mean stratified k-fold CV accuracy of logistic regression on the given
/// columns; `-inf` when any fold fails to train.
pub fn cv_logistic_accuracy(data: &BinaryDataset, cols: &[usize], folds: &[Vec<usize>]) -> f64 {
    let x = data.features.select(cols);
    let cfg = LearnerConfig::new(LearnerKind::Logistic, 0);
    let mut total = 0.0;
    for fold in folds {
        let train_rows = complement(data.n_rows(), fold);
        let train = x.take_rows(&train_rows);
        let test = x.take_rows(fold);
        let Ok(std) = standardize(&train, &test) else {
            return f64::NEG_INFINITY;
        };
        let y_train: Vec<u8> = train_rows.iter().map(|&i| data.target[i]).collect();
        let Ok(model) = train_logistic(&std.train, &y_train, &cfg) else {
            return f64::NEG_INFINITY;
        };
        let Ok(pred) = model.predict(&std.test) else {
            return f64::NEG_INFINITY;
        };
        let hits = pred.iter().zip(fold).filter(|(p, &i)| **p == data.target[i]).count();
        total += hits as f64 / fold.len() as f64;
    }
    total / folds.len() as f64
}

/// GA selection with cross-validated logistic-regression accuracy as fitness.
pub fn ga_select<E: Executor>(data: &BinaryDataset, params: &GaParams, seed: u64, exec: &E) -> Result<GaOutcome> {
    check_k(params.k, data.n_features())?;
    let folds = stratified_folds(&data.target, params.cv_folds, rng::subseed(seed, 1))?;
    let fitness = |cols: &[usize]| cv_logistic_accuracy(data, cols, &folds);
    let (outcome, _) = ga_search(data.n_features(), params, rng::subseed(seed, 0), &fitness, exec)?;
    Ok(outcome)
}
