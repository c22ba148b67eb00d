//! Exactly uniform random quadrangulations and Monte Carlo ensemble
//! estimators.
//!
//! Trees are drawn by rejection: a uniform plane tree (cycle-lemma rotation
//! of a uniform up/down word) with independent uniform label increments,
//! accepted iff all labels stay positive. Acceptance probability is exactly
//! `2/(n+2)`. The arch construction transports uniformity to rooted
//! quadrangulations.
//!
//! Estimators target the pointed ensemble (probability proportional to the
//! inverse automorphism order): a rooted sample with root tail `v`
//! represents the pointed map `(M, v)` with multiplicity `deg(v)`, so each
//! sample enters with importance weight `1/deg(v)` and the weight sum
//! normalizes. Raw (rooted-ensemble) moments are kept alongside.
//!
//! RNG: ChaCha8, seeded from the configured master seed; worker `w` uses
//! stream `w`, so results are reproducible for a fixed seed and worker
//! count, and independent across workers.

use crate::bijection::tree_to_quad;
use crate::error::{Error, Result};
use crate::map::bfs_labels;
use crate::tree::WellLabeledTree;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Scratch-buffer sampler for well-labeled trees with `n` edges.
///
/// One attempt: a uniform up/down word (Floyd sampling of the up-step
/// positions over a generation-stamped bitmap), the cycle-lemma rotation
/// point, and an allocation-free validation walk drawing the label
/// increments, aborting at the first label below 1. The tree is only
/// materialized for accepted attempts.
pub struct TreeSampler {
    n: usize,
    up_stamp: Vec<u32>,
    stamp: u32,
    deltas: Vec<i8>,
    label_stack: Vec<i32>,
    /// number of word attempts since construction
    pub attempts: u64,
}

impl TreeSampler {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        TreeSampler {
            n,
            up_stamp: vec![0; 2 * n + 1],
            stamp: 0,
            deltas: Vec::with_capacity(n),
            label_stack: Vec::with_capacity(n + 1),
            attempts: 0,
        }
    }

    /// Draws one exactly uniform well-labeled tree (Las Vegas; expected
    /// `(n+2)/2` attempts).
    pub fn sample(&mut self, rng: &mut impl Rng) -> WellLabeledTree {
        loop {
            self.attempts += 1;
            if let Some(start) = self.attempt(rng) {
                let t = self.rebuild(start);
                debug_assert!(t.validate());
                return t;
            }
        }
    }

    #[inline]
    fn is_up(&self, k: usize) -> bool {
        self.up_stamp[k] == self.stamp
    }

    /// Returns the rotation start on success.
    fn attempt(&mut self, rng: &mut impl Rng) -> Option<usize> {
        let n = self.n;
        let m = 2 * n + 1;
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.up_stamp.fill(0);
            self.stamp = 1;
        }
        // Floyd sampling: n up-positions uniform among m slots
        for j in m - n..m {
            let t = rng.gen_range(0..=j);
            if self.up_stamp[t] == self.stamp {
                self.up_stamp[j] = self.stamp;
            } else {
                self.up_stamp[t] = self.stamp;
            }
        }
        // cycle lemma: the unique valid rotation starts after the first
        // prefix-sum minimum
        let mut sum = 0i32;
        let mut min = i32::MAX;
        let mut min_pos = 0usize;
        for k in 0..m {
            sum += if self.is_up(k) { 1 } else { -1 };
            if sum < min {
                min = sum;
                min_pos = k;
            }
        }
        let start = (min_pos + 1) % m;
        // validation walk: track only the label stack, abort on label < 1
        self.deltas.clear();
        self.label_stack.clear();
        self.label_stack.push(1);
        for k in 0..m - 1 {
            let pos = start + k;
            let pos = if pos >= m { pos - m } else { pos };
            if self.is_up(pos) {
                let delta = rng.gen_range(-1i8..=1);
                let label = self.label_stack.last().unwrap() + delta as i32;
                if label < 1 {
                    return None;
                }
                self.deltas.push(delta);
                self.label_stack.push(label);
            } else {
                self.label_stack.pop();
            }
        }
        Some(start)
    }

    /// Builds the accepted tree from the word and the recorded increments.
    fn rebuild(&self, start: usize) -> WellLabeledTree {
        let n = self.n;
        let m = 2 * n + 1;
        let mut children: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
        let mut labels: Vec<usize> = Vec::with_capacity(n + 1);
        children.push(Vec::new());
        labels.push(1);
        let mut stack: Vec<usize> = vec![0];
        let mut next_delta = 0usize;
        for k in 0..m - 1 {
            let pos = start + k;
            let pos = if pos >= m { pos - m } else { pos };
            if self.is_up(pos) {
                let parent = *stack.last().unwrap();
                let label =
                    (labels[parent] as i64 + self.deltas[next_delta] as i64) as usize;
                next_delta += 1;
                let c = labels.len();
                children.push(Vec::new());
                labels.push(label);
                children[parent].push(c);
                stack.push(c);
            } else {
                stack.pop();
            }
        }
        debug_assert_eq!(stack.len(), 1);
        WellLabeledTree { children, labels }
    }
}

/// Draws one exactly uniform rooted quadrangulation with `n` faces.
pub fn sample_quadrangulation(
    n: usize,
    rng: &mut impl Rng,
) -> crate::bijection::TreeToQuad {
    let mut s = TreeSampler::new(n);
    tree_to_quad(&s.sample(rng))
}

/// Mergeable accumulator of weighted first and second moments.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
    pub weight_sum: f64,
    pub weight_sq_sum: f64,
    pub weighted_sum: f64,
    pub weighted_sum_sq: f64,
}

impl Accumulator {
    pub fn push(&mut self, value: f64, weight: f64) {
        self.count += 1;
        self.sum += value;
        self.sum_sq += value * value;
        self.weight_sum += weight;
        self.weight_sq_sum += weight * weight;
        self.weighted_sum += weight * value;
        self.weighted_sum_sq += weight * value * value;
    }

    /// Exact on the stored moments: merging equals accumulating the
    /// concatenated stream.
    pub fn merge(&mut self, other: &Accumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.weight_sum += other.weight_sum;
        self.weight_sq_sum += other.weight_sq_sum;
        self.weighted_sum += other.weighted_sum;
        self.weighted_sum_sq += other.weighted_sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    pub fn stderr(&self) -> f64 {
        let n = self.count as f64;
        let var = (self.sum_sq / n - self.mean() * self.mean()).max(0.0);
        (var / n).sqrt()
    }

    /// Importance-weighted mean (the pointed-ensemble estimator).
    pub fn weighted_mean(&self) -> f64 {
        self.weighted_sum / self.weight_sum
    }

    /// Standard error of the weighted ratio estimator.
    pub fn weighted_stderr(&self) -> f64 {
        let mu = self.weighted_mean();
        let var = (self.weighted_sum_sq / self.weight_sum - mu * mu).max(0.0);
        (var * self.weight_sq_sum).sqrt() / self.weight_sum
    }
}

/// A per-sample scalar observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// number of geodesic paths of length `i` emerging from the origin
    GeodesicCount { i: usize },
    /// number of vertices at distance `i` from the origin
    VerticesAtDistance { i: usize },
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::GeodesicCount { i } => format!("geodesics[{i}]"),
            Observable::VerticesAtDistance { i } => format!("vertices[{i}]"),
        }
    }

    fn evaluate(
        &self,
        q: &crate::map::Quadrangulation,
        labels: &crate::map::DistanceLabeling,
    ) -> f64 {
        match *self {
            Observable::GeodesicCount { i } => {
                crate::geodesic::count_geodesics_of_length(q, labels, i) as f64
            }
            Observable::VerticesAtDistance { i } => {
                labels.labels.iter().filter(|&&l| l == i).count() as f64
            }
        }
    }
}

/// Experiment configuration; see the module docs for the estimator scheme.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub observables: Vec<Observable>,
    /// enumerate the whole family instead of sampling (`n` small)
    pub exhaustive: bool,
    pub workers: usize,
}

/// Statistics for one observable of one experiment.
#[derive(Clone, Debug)]
pub struct ObservableStats {
    pub observable: Observable,
    pub acc: Accumulator,
}

/// Result bundle: per-observable accumulators plus the attempt counter of
/// the rejection sampler.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub stats: Vec<ObservableStats>,
    pub samples: u64,
    pub attempts: u64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.n < 1 || config.observables.is_empty() {
        return Err(Error::ConfigInvalid("need n >= 1 and at least one observable".into()));
    }
    if config.exhaustive {
        return run_exhaustive(config);
    }
    if config.samples == 0 {
        return Err(Error::ConfigInvalid("need samples >= 1".into()));
    }
    let workers = config.workers.max(1);
    let per: Vec<usize> = (0..workers)
        .map(|w| config.samples / workers + usize::from(w < config.samples % workers))
        .collect();
    use rayon::prelude::*;
    let partials: Vec<(Vec<Accumulator>, u64)> = per
        .par_iter()
        .enumerate()
        .map(|(w, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(w as u64);
            let mut sampler = TreeSampler::new(config.n);
            let mut accs = vec![Accumulator::default(); config.observables.len()];
            for _ in 0..count {
                let t = sampler.sample(&mut rng);
                let tq = tree_to_quad(&t);
                let origin = tq.quad.root_tail().unwrap();
                let labels = bfs_labels(&tq.quad.map, origin);
                let weight = 1.0 / tq.quad.map.degree(origin) as f64;
                for (acc, ob) in accs.iter_mut().zip(&config.observables) {
                    acc.push(ob.evaluate(&tq.quad, &labels), weight);
                }
            }
            (accs, sampler.attempts)
        })
        .collect();
    // merge in worker order: deterministic for fixed seed and worker count
    let mut stats: Vec<ObservableStats> = config
        .observables
        .iter()
        .map(|&observable| ObservableStats { observable, acc: Accumulator::default() })
        .collect();
    let mut attempts = 0;
    for (accs, att) in &partials {
        for (s, a) in stats.iter_mut().zip(accs) {
            s.acc.merge(a);
        }
        attempts += att;
    }
    Ok(ExperimentResult { stats, samples: config.samples as u64, attempts })
}

fn run_exhaustive(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut stats: Vec<ObservableStats> = config
        .observables
        .iter()
        .map(|&observable| ObservableStats { observable, acc: Accumulator::default() })
        .collect();
    let mut samples = 0u64;
    crate::tree::for_each_labeled_tree(config.n, 1, |t| {
        let tq = tree_to_quad(t);
        let origin = tq.quad.root_tail().unwrap();
        let labels = bfs_labels(&tq.quad.map, origin);
        let weight = 1.0 / tq.quad.map.degree(origin) as f64;
        for (s, ob) in stats.iter_mut().zip(&config.observables) {
            s.acc.push(ob.evaluate(&tq.quad, &labels), weight);
        }
        samples += 1;
    })?;
    Ok(ExperimentResult { stats, samples, attempts: samples })
}

/// Histogram of predecessor counts among vertices at distances in
/// `i_range`, over `samples` maps of size `n`: `hist[p]` counts vertices
/// with exactly `p` neighbors one step closer to the origin.
pub fn predecessor_histogram(
    n: usize,
    samples: usize,
    i_range: (usize, usize),
    seed: u64,
) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = TreeSampler::new(n);
    let mut hist = vec![0u64; 16];
    for _ in 0..samples {
        let t = sampler.sample(&mut rng);
        let tq = tree_to_quad(&t);
        let origin = tq.quad.root_tail().unwrap();
        let labels = bfs_labels(&tq.quad.map, origin);
        for i in i_range.0..=i_range.1 {
            for p in crate::geodesic::predecessor_counts(&tq.quad, &labels, i) {
                if p < hist.len() {
                    hist[p] += 1;
                }
            }
        }
    }
    hist
}

/// Pearson chi-square statistic against the uniform distribution over
/// `classes` cells.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}
