//! Permutation tours and the moves the swarm uses to travel between them.
//!
//! A tour is read cyclically. Distances between tours count undirected edges,
//! so a tour, its rotations and its reflection are all at distance zero.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::DistanceMatrix;

const IMPROVEMENT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Tour(Vec<usize>);

impl TryFrom<Vec<usize>> for Tour {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Tour::new(order)
    }
}

impl From<Tour> for Vec<usize> {
    fn from(t: Tour) -> Self {
        t.0
    }
}

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order) {
            return Err(Error::NotPermutation { n: order.len() });
        }
        Ok(Self(order))
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order));
        Self(order)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self(order)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Self(v)
    }

    /// Rotation starting at the smallest city, oriented so the second city is
    /// smaller than the last. Equal canonical forms mean equal edge sets.
    pub fn canonical(&self) -> Vec<usize> {
        let n = self.len();
        if n == 0 {
            return Vec::new();
        }
        let start = self.0.iter().position(|&c| c == 0).unwrap_or(0);
        let mut fwd: Vec<usize> = (0..n).map(|k| self.0[(start + k) % n]).collect();
        if n > 2 && fwd[1] > fwd[n - 1] {
            fwd[1..].reverse();
        }
        fwd
    }

    /// Unchecked cyclic length; callers guarantee `d.len() == self.len()`.
    #[inline]
    pub fn length(&self, d: &DistanceMatrix) -> f64 {
        cyclic_length(&self.0, d)
    }

    pub fn edges(&self) -> EdgeSet {
        let n = self.len();
        let mut edges: Vec<(usize, usize)> = (0..n)
            .map(|i| ordered(self.0[i], self.0[(i + 1) % n]))
            .collect();
        edges.sort_unstable();
        EdgeSet { edges }
    }

    /// `adjacency()[c]` holds the predecessor and successor of city `c`.
    pub(crate) fn adjacency(&self) -> Vec<[usize; 2]> {
        adjacency(&self.0)
    }
}

/// Sorted multiset of undirected edges of a tour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&ordered(a, b)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

pub fn is_permutation(order: &[usize]) -> bool {
    let n = order.len();
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

#[inline]
fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn adjacency(order: &[usize]) -> Vec<[usize; 2]> {
    let n = order.len();
    let mut adj = vec![[0usize; 2]; n];
    for i in 0..n {
        adj[order[i]] = [order[(i + n - 1) % n], order[(i + 1) % n]];
    }
    adj
}

#[inline]
fn adjacent(adj: &[[usize; 2]], a: usize, b: usize) -> bool {
    adj[a][0] == b || adj[a][1] == b
}

pub(crate) fn cyclic_length(order: &[usize], d: &DistanceMatrix) -> f64 {
    let n = order.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = d.get(order[n - 1], order[0]);
    for w in order.windows(2) {
        total += d.get(w[0], w[1]);
    }
    total
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

pub fn tour_length(t: &Tour, d: &DistanceMatrix) -> Result<f64> {
    check_dim(d.len(), t.len())?;
    Ok(t.length(d))
}

/// Number of undirected edges of `a` that are absent from `b`.
pub fn edge_distance(a: &Tour, b: &Tour) -> Result<usize> {
    check_dim(a.len(), b.len())?;
    Ok(edge_distance_raw(&a.0, &b.adjacency()))
}

pub(crate) fn edge_distance_raw(a: &[usize], b_adj: &[[usize; 2]]) -> usize {
    let n = a.len();
    (0..n)
        .filter(|&i| !adjacent(b_adj, a[i], a[(i + 1) % n]))
        .count()
}

/// Reverses the segment `order[i..=j]`.
pub fn two_opt_move(t: &Tour, i: usize, j: usize) -> Result<Tour> {
    let n = t.len();
    if i >= j || j >= n {
        return Err(Error::PositionOutOfRange { i, j, n });
    }
    let mut order = t.0.clone();
    order[i..=j].reverse();
    Ok(Tour(order))
}

/// First-improvement 2-opt in lexicographic `(i, j)` order. A pass applies every
/// improving reversal it meets; the search stops after a pass without
/// improvement or after `max_passes` passes.
pub fn two_opt_improve(t: &Tour, d: &DistanceMatrix, max_passes: usize) -> Tour {
    let mut order = t.0.clone();
    two_opt_in_place(&mut order, |a, b| d.get(a, b), max_passes);
    Tour(order)
}

/// 2-opt on an open or closed sequence with an arbitrary symmetric weight.
/// Returns true when at least one improving move was applied.
pub(crate) fn two_opt_in_place<W>(order: &mut [usize], w: W, max_passes: usize) -> bool
where
    W: Fn(usize, usize) -> f64,
{
    let n = order.len();
    if n < 4 {
        return false;
    }
    let mut any = false;
    for _ in 0..max_passes {
        let mut improved = false;
        for i in 0..n - 1 {
            for j in (i + 1)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let a = order[(i + n - 1) % n];
                let b = order[i];
                let c = order[j];
                let e = order[(j + 1) % n];
                let delta = w(a, c) + w(b, e) - w(a, b) - w(c, e);
                if delta < -IMPROVEMENT_EPS {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
        any = true;
    }
    any
}

/// Applies up to `max_steps` guided moves, each inserting one edge of `target`
/// that `t` lacks and strictly reducing the edge distance to `target`.
pub fn move_toward<R: Rng + ?Sized>(
    t: &Tour,
    target: &Tour,
    max_steps: usize,
    rng: &mut R,
) -> Result<Tour> {
    check_dim(t.len(), target.len())?;
    let mut order = t.0.clone();
    let target_adj = target.adjacency();
    for _ in 0..max_steps {
        if !guided_step(&mut order, &target_adj, rng) {
            break;
        }
    }
    Ok(Tour(order))
}

/// One guided step. Prefers a single reversal that creates the chosen edge;
/// when neither reversal reduces the distance, relocates the common fragment
/// ending at the chosen edge instead. Returns false at distance zero.
pub(crate) fn guided_step<R: Rng + ?Sized>(
    order: &mut Vec<usize>,
    target_adj: &[[usize; 2]],
    rng: &mut R,
) -> bool {
    let n = order.len();
    if n < 4 {
        return false;
    }
    let adj = adjacency(order);
    let mut missing = Vec::new();
    for (u, nbrs) in target_adj.iter().enumerate().take(n) {
        for &v in nbrs {
            if u < v && !adjacent(&adj, u, v) {
                missing.push((u, v));
            }
        }
    }
    let Some(&(mut u, mut v)) = missing.choose(rng) else {
        return false;
    };
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut u, &mut v);
    }

    let mut pos = vec![0; n];
    for (i, &c) in order.iter().enumerate() {
        pos[c] = i;
    }
    let off = |a: usize, b: usize| usize::from(!adjacent(target_adj, a, b));
    let (pu, pv) = (pos[u], pos[v]);
    let (su, sv) = (order[(pu + 1) % n], order[(pv + 1) % n]);
    let (qu, qv) = (order[(pu + n - 1) % n], order[(pv + n - 1) % n]);
    // Successor-side reversal removes (u,su),(v,sv) and adds (u,v),(su,sv);
    // predecessor-side removes (qu,u),(qv,v) and adds (qu,qv),(u,v).
    let delta_succ = off(su, sv) as isize - off(u, su) as isize - off(v, sv) as isize;
    let delta_pred = off(qu, qv) as isize - off(qu, u) as isize - off(qv, v) as isize;
    if delta_succ < 0 && delta_succ <= delta_pred {
        let (lo, hi) = if pu < pv { (pu + 1, pv) } else { (pv + 1, pu) };
        order[lo..=hi].reverse();
        return true;
    }
    if delta_pred < 0 {
        let (lo, hi) = if pu < pv { (pu, pv - 1) } else { (pv, pu - 1) };
        order[lo..=hi].reverse();
        return true;
    }
    relocate_fragment(order, target_adj, u, v, &pos, rng);
    true
}

fn relocate_fragment<R: Rng + ?Sized>(
    order: &mut Vec<usize>,
    target_adj: &[[usize; 2]],
    u: usize,
    v: usize,
    pos: &[usize],
    rng: &mut R,
) {
    let n = order.len();
    let at = |i: isize| order[i.rem_euclid(n as isize) as usize];
    let pv = pos[v] as isize;
    // `v` ends a maximal run of target edges; walk the run away from `v`.
    let dir: isize = if adjacent(target_adj, v, at(pv + 1)) {
        1
    } else if adjacent(target_adj, v, at(pv - 1)) {
        -1
    } else {
        0
    };
    let mut frag = vec![v];
    if dir != 0 {
        let mut p = pv;
        while frag.len() < n - 1 && adjacent(target_adj, at(p), at(p + dir)) {
            p += dir;
            frag.push(at(p));
        }
    }
    let start = if dir >= 0 {
        pv
    } else {
        pv - (frag.len() as isize - 1)
    };
    let rest: Vec<usize> = (0..(n - frag.len()) as isize)
        .map(|k| at(start + frag.len() as isize + k))
        .collect();
    let iu = rest
        .iter()
        .position(|&c| c == u)
        .expect("u lies outside the fragment");

    let mut after = Vec::with_capacity(n);
    after.extend_from_slice(&rest[..=iu]);
    after.extend_from_slice(&frag);
    after.extend_from_slice(&rest[iu + 1..]);

    let mut before = Vec::with_capacity(n);
    before.extend_from_slice(&rest[..iu]);
    before.extend(frag.iter().rev());
    before.extend_from_slice(&rest[iu..]);

    let da = edge_distance_raw(&after, target_adj);
    let db = edge_distance_raw(&before, target_adj);
    *order = match da.cmp(&db) {
        std::cmp::Ordering::Less => after,
        std::cmp::Ordering::Greater => before,
        std::cmp::Ordering::Equal => {
            if rng.gen_bool(0.5) {
                after
            } else {
                before
            }
        }
    };
}

/// Draws `m` uniformly from `[1, max(1, floor(visual / 2))]` and applies `m`
/// random non-trivial reversals.
pub fn random_neighbor<R: Rng + ?Sized>(t: &Tour, visual: f64, rng: &mut R) -> Tour {
    let mut order = t.0.clone();
    let m = rng.gen_range(1..=move_budget(visual / 2.0));
    for _ in 0..m {
        random_reversal(&mut order, rng);
    }
    Tour(order)
}

/// `max(1, floor(x))` as a move count.
pub(crate) fn move_budget(x: f64) -> usize {
    if x.is_finite() && x >= 1.0 {
        x.floor() as usize
    } else {
        1
    }
}

/// Reverses a random segment that changes exactly two edges. No-op for n < 4.
pub(crate) fn random_reversal<R: Rng + ?Sized>(order: &mut [usize], rng: &mut R) {
    let n = order.len();
    if n < 4 {
        return;
    }
    loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == j || (i == 0 && j == n - 1) {
            continue;
        }
        order[i..=j].reverse();
        return;
    }
}

/// Consensus tour of `neighbors` by greedy edge voting.
///
/// Edges are taken by descending vote count, then shorter length, then lower
/// index pair, as long as no city exceeds degree two and no early subcycle
/// forms. Remaining fragments are joined shortest-edge-first.
pub fn swarm_center(neighbors: &[&Tour], d: &DistanceMatrix) -> Result<Tour> {
    let first = neighbors.first().ok_or(Error::EmptyNeighbours)?;
    let n = first.len();
    for t in neighbors {
        check_dim(n, t.len())?;
    }
    check_dim(d.len(), n)?;
    if n < 4 {
        return Ok((*first).clone());
    }

    let mut votes: HashMap<(usize, usize), usize> = HashMap::new();
    for t in neighbors {
        let o = t.order();
        for i in 0..n {
            *votes.entry(ordered(o[i], o[(i + 1) % n])).or_default() += 1;
        }
    }
    let mut ranked: Vec<(usize, f64, usize, usize)> = votes
        .into_iter()
        .map(|((a, b), c)| (c, d.get(a, b), a, b))
        .collect();
    ranked.sort_by(|x, y| {
        y.0.cmp(&x.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
    });

    let mut builder = PathBuilder::new(n);
    for &(_, _, a, b) in &ranked {
        builder.try_add(a, b);
    }
    if builder.edges < n - 1 {
        let open: Vec<usize> = (0..n).filter(|&c| builder.deg[c] < 2).collect();
        let mut pairs = Vec::with_capacity(open.len() * open.len() / 2);
        for (k, &a) in open.iter().enumerate() {
            for &b in &open[k + 1..] {
                pairs.push((d.get(a, b), a, b));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        for &(_, a, b) in &pairs {
            if builder.edges == n - 1 {
                break;
            }
            builder.try_add(a, b);
        }
    }
    Ok(Tour(builder.into_cycle()))
}

struct PathBuilder {
    deg: Vec<usize>,
    adj: Vec<[usize; 2]>,
    parent: Vec<usize>,
    edges: usize,
}

impl PathBuilder {
    fn new(n: usize) -> Self {
        Self {
            deg: vec![0; n],
            adj: vec![[usize::MAX; 2]; n],
            parent: (0..n).collect(),
            edges: 0,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn try_add(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.deg[a] >= 2 || self.deg[b] >= 2 {
            return false;
        }
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.adj[a][self.deg[a]] = b;
        self.adj[b][self.deg[b]] = a;
        self.deg[a] += 1;
        self.deg[b] += 1;
        self.edges += 1;
        true
    }

    /// Walks the Hamiltonian path from one end; the closing edge is implicit.
    fn into_cycle(self) -> Vec<usize> {
        let n = self.deg.len();
        let start = (0..n).find(|&c| self.deg[c] < 2).unwrap_or(0);
        let mut order = Vec::with_capacity(n);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            order.push(cur);
            let next = self.adj[cur]
                .iter()
                .copied()
                .find(|&x| x != usize::MAX && x != prev);
            match next {
                Some(x) if order.len() < n => {
                    prev = cur;
                    cur = x;
                }
                _ => break,
            }
        }
        order
    }
}
