//! The discrete space the swarm swims in.
//!
//! Behaviours and DE operators are written against [`SearchSpace`], so the
//! same solver drives plain tours ([`TspSpace`]) and depot-rooted multi-group
//! plans ([`crate::mtsp::MtspSpace`]).

use rand::Rng;

use crate::de;
use crate::instance::DistanceMatrix;
use crate::tour::{self, Tour};

pub trait SearchSpace: Sync {
    type State: Clone + Send + Sync + PartialEq + std::fmt::Debug;

    fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::State;

    /// Objective to minimise.
    fn fitness(&self, s: &Self::State) -> f64;

    /// Discrete distance between two states; zero for equivalent states.
    fn distance(&self, a: &Self::State, b: &Self::State) -> usize;

    /// A random state within `visual` of `s`.
    fn random_neighbor<R: Rng + ?Sized>(
        &self,
        s: &Self::State,
        visual: f64,
        rng: &mut R,
    ) -> Self::State;

    /// Up to `steps` guided moves from `s` toward `target`.
    fn move_toward<R: Rng + ?Sized>(
        &self,
        s: &Self::State,
        target: &Self::State,
        steps: usize,
        rng: &mut R,
    ) -> Self::State;

    /// Consensus of a non-empty neighbour list.
    fn center(&self, neighbors: &[&Self::State]) -> Self::State;

    /// Local optimisation that never worsens fitness.
    fn local_search(&self, s: &Self::State) -> Self::State;

    /// A reversal at positions chosen from two unit-interval values.
    fn chaotic_move(&self, s: &Self::State, a: f64, b: f64) -> Self::State;

    /// `base` plus the difference `to - from` scaled by `scale`.
    fn de_combine(
        &self,
        base: &Self::State,
        from: &Self::State,
        to: &Self::State,
        scale: f64,
    ) -> Self::State;

    /// Binomial crossover of target `x` with mutant `v`.
    fn crossover<R: Rng + ?Sized>(
        &self,
        x: &Self::State,
        v: &Self::State,
        cr: f64,
        rng: &mut R,
    ) -> Self::State;
}

/// Symmetric TSP over a precomputed distance matrix.
#[derive(Debug, Clone)]
pub struct TspSpace {
    d: DistanceMatrix,
    two_opt_passes: usize,
}

impl TspSpace {
    pub fn new(d: DistanceMatrix) -> Self {
        let two_opt_passes = d.len().max(1) * 4;
        Self { d, two_opt_passes }
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.d
    }

    pub fn dimension(&self) -> usize {
        self.d.len()
    }
}

/// Maps `z ∈ [0, 1)` to a position in `0..n`.
pub(crate) fn unit_to_index(z: f64, n: usize) -> usize {
    ((z * n as f64).floor() as usize).min(n.saturating_sub(1))
}

impl SearchSpace for TspSpace {
    type State = Tour;

    fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Tour {
        Tour::random(self.d.len(), rng)
    }

    fn fitness(&self, s: &Tour) -> f64 {
        s.length(&self.d)
    }

    fn distance(&self, a: &Tour, b: &Tour) -> usize {
        tour::edge_distance_raw(a.order(), &b.adjacency())
    }

    fn random_neighbor<R: Rng + ?Sized>(&self, s: &Tour, visual: f64, rng: &mut R) -> Tour {
        tour::random_neighbor(s, visual, rng)
    }

    fn move_toward<R: Rng + ?Sized>(
        &self,
        s: &Tour,
        target: &Tour,
        steps: usize,
        rng: &mut R,
    ) -> Tour {
        tour::move_toward(s, target, steps, rng).expect("states share the space dimension")
    }

    fn center(&self, neighbors: &[&Tour]) -> Tour {
        tour::swarm_center(neighbors, &self.d).expect("non-empty neighbour list")
    }

    fn local_search(&self, s: &Tour) -> Tour {
        tour::two_opt_improve(s, &self.d, self.two_opt_passes)
    }

    fn chaotic_move(&self, s: &Tour, a: f64, b: f64) -> Tour {
        let n = s.len();
        let (i, j) = (unit_to_index(a, n), unit_to_index(b, n));
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            return s.clone();
        }
        tour::two_opt_move(s, i, j).expect("positions in range")
    }

    fn de_combine(&self, base: &Tour, from: &Tour, to: &Tour, scale: f64) -> Tour {
        let seq = de::swap_sequence(from, to).expect("same dimension");
        de::scale_sequence(&seq, scale).apply(base)
    }

    fn crossover<R: Rng + ?Sized>(&self, x: &Tour, v: &Tour, cr: f64, rng: &mut R) -> Tour {
        de::binomial_cross(x, v, cr, rng).expect("same dimension")
    }
}
