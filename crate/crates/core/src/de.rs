//! Differential evolution on permutations.
//!
//! Differences between tours are swap sequences: the transpositions that turn
//! one tour into another. Scaling keeps a prefix of the sequence and addition
//! applies it to a base tour, which gives the usual `base + F * (a - b)` shape.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::afsa::Fish;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::space::SearchSpace;
use crate::tour::Tour;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSequence(Vec<(usize, usize)>);

impl SwapSequence {
    pub fn new(swaps: Vec<(usize, usize)>) -> Self {
        Self(swaps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn apply(&self, base: &Tour) -> Tour {
        let mut order = base.order().to_vec();
        self.apply_in_place(&mut order);
        Tour::from_vec_unchecked(order)
    }

    pub(crate) fn apply_in_place(&self, order: &mut [usize]) {
        for &(a, b) in &self.0 {
            order.swap(a, b);
        }
    }
}

/// Position-wise transpositions turning `from` into `to` (at most n - 1).
pub fn swap_sequence(from: &Tour, to: &Tour) -> Result<SwapSequence> {
    if from.len() != to.len() {
        return Err(Error::DimensionMismatch {
            expected: from.len(),
            actual: to.len(),
        });
    }
    Ok(SwapSequence(swap_sequence_raw(from.order(), to.order())))
}

pub(crate) fn swap_sequence_raw(from: &[usize], to: &[usize]) -> Vec<(usize, usize)> {
    let n = from.len();
    let mut cur = from.to_vec();
    let mut pos = vec![0; n];
    for (i, &c) in cur.iter().enumerate() {
        pos[c] = i;
    }
    let mut swaps = Vec::new();
    for p in 0..n {
        if cur[p] != to[p] {
            let q = pos[to[p]];
            let displaced = cur[p];
            cur.swap(p, q);
            pos[displaced] = q;
            pos[to[p]] = p;
            swaps.push((p, q));
        }
    }
    swaps
}

/// Prefix of length `ceil(f * |s|)`, with `f` clamped to `[0, 1]`.
pub fn scale_sequence(s: &SwapSequence, f: f64) -> SwapSequence {
    SwapSequence(s.0[..scaled_len(s.len(), f)].to_vec())
}

pub(crate) fn scaled_len(len: usize, f: f64) -> usize {
    let f = f.clamp(0.0, 1.0);
    // Tolerate products like 0.1 * 30 landing just above an integer.
    (((f * len as f64) - 1e-9).ceil().max(0.0) as usize).min(len)
}

/// Binomial crossover with order-preserving repair.
pub fn binomial_cross<R: Rng + ?Sized>(x: &Tour, v: &Tour, cr: f64, rng: &mut R) -> Result<Tour> {
    let n = x.len();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    if n == 0 {
        return Ok(x.clone());
    }
    let mask = crossover_mask(n, cr, rng);
    Ok(Tour::from_vec_unchecked(cross_with_mask(
        x.order(),
        v.order(),
        &mask,
    )))
}

/// `mask[j]` is true when position `j` inherits from the mutant. One position,
/// `j_rand`, is always marked.
pub fn crossover_mask<R: Rng + ?Sized>(n: usize, cr: f64, rng: &mut R) -> Vec<bool> {
    let j_rand = rng.gen_range(0..n);
    (0..n)
        .map(|j| rng.gen::<f64>() <= cr || j == j_rand)
        .collect()
}

/// Marked positions copy `v`; the remaining cities fill the unmarked positions
/// in the order they appear in `x`.
pub fn cross_with_mask(x: &[usize], v: &[usize], mask: &[bool]) -> Vec<usize> {
    let n = x.len();
    let mut used = vec![false; n];
    let mut out = vec![usize::MAX; n];
    for j in 0..n {
        if mask[j] {
            out[j] = v[j];
            used[v[j]] = true;
        }
    }
    let mut fill = x.iter().copied().filter(|&c| !used[c]);
    for slot in out.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = fill.next().expect("one free city per free slot");
    }
    out
}

/// Keeps the offspring when it is no worse than the parent.
pub fn greedy_select<T>(x: Fish<T>, u: Fish<T>) -> Fish<T> {
    if u.fitness <= x.fitness {
        u
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    /// Scaling factor of the random difference.
    pub f: f64,
    /// Pull toward the best individual in rand-to-best/1.
    pub k_de: f64,
    pub cr: f64,
    /// Sub-population proportions.
    pub lambdas: [f64; 3],
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            f: 0.5,
            k_de: 0.5,
            cr: 0.5,
            lambdas: [1.0 / 3.0; 3],
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.f) || !unit(self.k_de) || !unit(self.cr) {
            return Err(Error::Config("F, K_de and CR must lie in [0, 1]".into()));
        }
        if !self.lambdas.iter().all(|&l| unit(l)) {
            return Err(Error::Config(
                "sub-population proportions must lie in [0, 1]".into(),
            ));
        }
        if (self.lambdas.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::Config(
                "sub-population proportions must sum to 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    RandOne,
    BestOne,
    RandToBestOne,
}

/// How an epoch assigns strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeMode {
    /// Three random sub-populations using rand/1, best/1 and rand-to-best/1.
    MultiPopulation,
    /// The whole population uses rand/1.
    RandOnly,
}

/// Random partition of `0..n` into three sets sized `floor(λ1 n)`,
/// `floor(λ2 n)` and the remainder.
pub fn split_populations<R: Rng + ?Sized>(
    n: usize,
    lambdas: [f64; 3],
    rng: &mut R,
) -> [Vec<usize>; 3] {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let n1 = ((lambdas[0] * n as f64 + 1e-9).floor() as usize).min(n);
    let n2 = ((lambdas[1] * n as f64 + 1e-9).floor() as usize).min(n - n1);
    let s3 = idx.split_off(n1 + n2);
    let s2 = idx.split_off(n1);
    [idx, s2, s3]
}

/// Draws `k` distinct members of `pool` avoiding `exclude`, or `None` when too
/// few remain.
fn draw_distinct<R: Rng + ?Sized>(
    pool: &[usize],
    exclude: &[usize],
    k: usize,
    rng: &mut R,
) -> Option<Vec<usize>> {
    let usable: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|c| !exclude.contains(c))
        .collect();
    if usable.len() < k {
        return None;
    }
    Some(usable.choose_multiple(rng, k).copied().collect())
}

/// rand/1: `X_r1 + F (X_r2 - X_r3)` with `r2, r3` from `sub` and `r1` from the
/// whole population.
pub fn mutate_rand_1<S: SearchSpace, R: Rng + ?Sized>(
    space: &S,
    pop: &[S::State],
    sub: &[usize],
    i: usize,
    f: f64,
    rng: &mut R,
) -> Option<S::State> {
    let r = draw_distinct(sub, &[i], 2, rng)?;
    let all: Vec<usize> = (0..pop.len()).collect();
    let r1 = draw_distinct(&all, &[i, r[0], r[1]], 1, rng)?[0];
    Some(space.de_combine(&pop[r1], &pop[r[1]], &pop[r[0]], f))
}

/// best/1: `X_best + F (X_r1 - X_r2)`.
pub fn mutate_best_1<S: SearchSpace, R: Rng + ?Sized>(
    space: &S,
    pop: &[S::State],
    sub: &[usize],
    best: &S::State,
    i: usize,
    f: f64,
    rng: &mut R,
) -> Option<S::State> {
    let r = draw_distinct(sub, &[i], 2, rng)?;
    Some(space.de_combine(best, &pop[r[1]], &pop[r[0]], f))
}

/// rand-to-best/1: `X_i + K (X_best - X_i) + F (X_r1 - X_r2)`.
#[allow(clippy::too_many_arguments)]
pub fn mutate_rand_to_best_1<S: SearchSpace, R: Rng + ?Sized>(
    space: &S,
    pop: &[S::State],
    sub: &[usize],
    best: &S::State,
    i: usize,
    f: f64,
    k_de: f64,
    rng: &mut R,
) -> Option<S::State> {
    let r = draw_distinct(sub, &[i], 2, rng)?;
    let pulled = space.de_combine(&pop[i], &pop[i], best, k_de);
    Some(space.de_combine(&pulled, &pop[r[1]], &pop[r[0]], f))
}

/// One epoch: split, mutate, cross and greedily select every individual.
/// With `polish`, trial states pass through the space's local search before
/// selection. Population size is preserved and the minimum fitness never
/// increases.
pub fn de_epoch<S: SearchSpace, R: Rng + ?Sized>(
    space: &S,
    swarm: &[Fish<S::State>],
    cfg: &DeConfig,
    mode: DeMode,
    polish: bool,
    rng: &mut R,
    exec: Execution,
) -> Vec<Fish<S::State>> {
    let n = swarm.len();
    if n == 0 {
        return Vec::new();
    }
    let epoch_seed: u64 = rng.gen();
    let mut split_rng = par::stream_rng(epoch_seed, &[u64::MAX]);
    let groups = match mode {
        DeMode::MultiPopulation => split_populations(n, cfg.lambdas, &mut split_rng),
        DeMode::RandOnly => [(0..n).collect(), Vec::new(), Vec::new()],
    };
    let mut strategy_of = vec![(Strategy::RandOne, 0usize); n];
    for (g, members) in groups.iter().enumerate() {
        let s = [
            Strategy::RandOne,
            Strategy::BestOne,
            Strategy::RandToBestOne,
        ][g];
        for &i in members {
            strategy_of[i] = (s, g);
        }
    }
    let states: Vec<S::State> = swarm.iter().map(|f| f.state.clone()).collect();
    let best = swarm
        .iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .map(|f| f.state.clone())
        .expect("non-empty swarm");

    par::map_range(n, exec, |i| {
        let mut rng = par::stream_rng(epoch_seed, &[i as u64]);
        let (strategy, g) = strategy_of[i];
        let sub = &groups[g];
        let mutant = match strategy {
            Strategy::RandOne => mutate_rand_1(space, &states, sub, i, cfg.f, &mut rng),
            Strategy::BestOne => mutate_best_1(space, &states, sub, &best, i, cfg.f, &mut rng),
            Strategy::RandToBestOne => {
                mutate_rand_to_best_1(space, &states, sub, &best, i, cfg.f, cfg.k_de, &mut rng)
            }
        };
        let parent = swarm[i].clone();
        match mutant {
            None => parent,
            Some(v) => {
                let mut u = space.crossover(&parent.state, &v, cfg.cr, &mut rng);
                if polish {
                    u = space.local_search(&u);
                }
                let child = Fish::new(space, u);
                greedy_select(parent, child)
            }
        }
    })
}
