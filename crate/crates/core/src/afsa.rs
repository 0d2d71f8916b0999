//! Artificial fish swarm behaviours over a [`SearchSpace`].
//!
//! The improved swarm shrinks its field of view and step over time, falls back
//! to local optimisation when preying fails, may accept slightly worse states
//! in the second half of the run, and refines the iteration best with a
//! logistic-map chaotic search.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SearchSpace;
use crate::tour::move_budget;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fish<T> {
    pub state: T,
    pub fitness: f64,
}

impl<T> Fish<T> {
    pub fn new<S: SearchSpace<State = T>>(space: &S, state: T) -> Self {
        let fitness = space.fitness(&state);
        Self { state, fitness }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub population: usize,
    pub max_iter: usize,
    pub trynum: usize,
    pub visual0: f64,
    pub step0: f64,
    /// Crowding factor.
    pub delta: f64,
    /// Lower limit factor of the visual/step schedules.
    pub beta: f64,
    /// Logistic map control parameter.
    pub mu: f64,
    pub sub_accept_prob: f64,
    /// Largest relative worsening a sub-optimal move may bring.
    pub sub_accept_eps: f64,
    /// Candidate evaluations per chaotic search.
    pub chaos_budget: usize,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            population: 20,
            max_iter: 200,
            trynum: 20,
            visual0: 10.0,
            step0: 6.0,
            delta: 0.8,
            beta: 0.2,
            mu: 4.0,
            sub_accept_prob: 0.1,
            sub_accept_eps: 0.05,
            chaos_budget: 20,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let checks = [
            (self.population >= 3, "population must be at least 3"),
            (self.max_iter >= 2, "max_iter must be at least 2"),
            (self.trynum >= 1, "trynum must be at least 1"),
            (self.visual0 >= 1.0, "initial visual must be at least 1"),
            (self.step0 >= 1.0, "initial step must be at least 1"),
            (open_unit(self.delta), "crowding factor must lie in (0, 1)"),
            (
                open_unit(self.beta),
                "lower limit factor must lie in (0, 1)",
            ),
            (
                open_unit(self.sub_accept_prob),
                "sub-optimal acceptance probability must lie in (0, 1)",
            ),
            (
                self.sub_accept_eps >= 0.0,
                "sub-optimal tolerance must be non-negative",
            ),
            (
                self.mu > 0.0 && self.mu <= 4.0,
                "logistic parameter must lie in (0, 4]",
            ),
            (self.chaos_budget >= 1, "chaos budget must be at least 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Config((*msg).into())),
            None => Ok(()),
        }
    }
}

/// Which improvements over the basic swarm are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Features {
    pub adaptive_schedule: bool,
    pub local_fallback: bool,
    pub sub_optimal: bool,
    pub chaos: bool,
}

impl Features {
    pub const BASIC: Features = Features {
        adaptive_schedule: false,
        local_fallback: false,
        sub_optimal: false,
        chaos: false,
    };

    pub const IMPROVED: Features = Features {
        adaptive_schedule: true,
        local_fallback: true,
        sub_optimal: true,
        chaos: true,
    };
}

/// Best state seen so far and the number of iterations since it improved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bulletin<T> {
    pub best: Fish<T>,
    pub stop_time: usize,
}

impl<T: Clone> Bulletin<T> {
    pub fn new(best: Fish<T>) -> Self {
        Self { best, stop_time: 0 }
    }

    /// Replaces the record if `candidate` is strictly better.
    pub fn offer(&mut self, candidate: &Fish<T>) -> bool {
        if candidate.fitness < self.best.fitness {
            self.best = candidate.clone();
            true
        } else {
            false
        }
    }

    /// One iteration's update: resets `stop_time` on improvement, otherwise
    /// increments it.
    pub fn update(&mut self, candidate: &Fish<T>) -> bool {
        let improved = self.offer(candidate);
        if improved {
            self.stop_time = 0;
        } else {
            self.stop_time += 1;
        }
        improved
    }
}

fn schedule(k: usize, max_k: usize, current: f64, initial: f64, beta: f64) -> Result<f64> {
    if max_k < 2 {
        return Err(Error::Config(
            "schedule needs at least two iterations".into(),
        ));
    }
    let factor = 1.0 - (k as f64 - 1.0) / (max_k as f64 - 1.0);
    let floor = beta * initial;
    if factor >= beta {
        // The decay halts once the floor is reached.
        Ok((factor * current).max(floor))
    } else {
        Ok(floor)
    }
}

/// Field of view for the next iteration after iteration `k` of `max_k`.
pub fn schedule_visual(
    k: usize,
    max_k: usize,
    visual: f64,
    visual0: f64,
    beta: f64,
) -> Result<f64> {
    schedule(k, max_k, visual, visual0, beta)
}

/// Moving step for the next iteration after iteration `k` of `max_k`.
pub fn schedule_step(k: usize, max_k: usize, step: f64, step0: f64, beta: f64) -> Result<f64> {
    schedule(k, max_k, step, step0, beta)
}

pub fn logistic_step(x: f64, mu: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::LogisticDomain(x));
    }
    Ok(mu * x * (1.0 - x))
}

/// Iterator over logistic map states `x ← μ x (1 − x)`.
#[derive(Debug, Clone)]
pub struct LogisticMap {
    x: f64,
    mu: f64,
}

impl LogisticMap {
    pub fn new(seed: f64, mu: f64) -> Result<Self> {
        logistic_step(seed, mu)?;
        Ok(Self { x: seed, mu })
    }

    /// Seeded uniformly from (0.05, 0.95), avoiding 0.25, 0.5 and 0.75.
    pub fn random<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> Self {
        loop {
            let x: f64 = rng.gen_range(0.05..0.95);
            if [0.25, 0.5, 0.75].iter().all(|p: &f64| (x - p).abs() > 1e-6) {
                return Self { x, mu };
            }
        }
    }

    pub fn state(&self) -> f64 {
        self.x
    }
}

impl Iterator for LogisticMap {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.x = self.mu * self.x * (1.0 - self.x);
        Some(self.x)
    }
}

/// Chaotic search around `best`. Each logistic value `z` sets a displacement
/// `−k·step + 2k·step·z` whose rounded magnitude is the number of reversals
/// applied, at positions also drawn from the map. `k` grows after every third
/// of the budget spent without improvement. Never returns a worse fish.
pub fn chaos_search<S: SearchSpace, R: Rng + ?Sized>(
    space: &S,
    best: &Fish<S::State>,
    step: f64,
    mu: f64,
    budget: usize,
    rng: &mut R,
) -> Fish<S::State> {
    let map = LogisticMap::random(mu, rng);
    chaos_search_with(space, best, step, budget, map)
}

pub(crate) fn chaos_search_with<S: SearchSpace>(
    space: &S,
    best: &Fish<S::State>,
    step: f64,
    budget: usize,
    mut map: LogisticMap,
) -> Fish<S::State> {
    let mut current = best.clone();
    let window = (budget / 3).max(1);
    let mut k = 1.0;
    let mut stale = 0;
    for _ in 0..budget {
        let z = map.next().unwrap_or(0.5);
        let dx = -k * step + 2.0 * k * step * z;
        let moves = (dx.abs().round() as usize).max(1);
        let mut cand = current.state.clone();
        for _ in 0..moves {
            let a = map.next().unwrap_or(0.5);
            let b = map.next().unwrap_or(0.5);
            cand = space.chaotic_move(&cand, a, b);
        }
        let fitness = space.fitness(&cand);
        if fitness < current.fitness {
            current = Fish {
                state: cand,
                fitness,
            };
            stale = 0;
            k = 1.0;
        } else {
            stale += 1;
            if stale >= window {
                k += 1.0;
                stale = 0;
            }
        }
    }
    current
}

/// Everything a behaviour needs besides the fish and the random stream.
#[derive(Debug, Clone, Copy)]
pub struct BehaviorContext<'a, S> {
    pub space: &'a S,
    pub cfg: &'a SwarmConfig,
    pub features: Features,
    /// Current iteration, starting at 1.
    pub iteration: usize,
    pub visual: f64,
    pub step: f64,
}

impl<S: SearchSpace> BehaviorContext<'_, S> {
    fn late_phase(&self) -> bool {
        2 * self.iteration >= self.cfg.max_iter
    }

    fn steps(&self) -> usize {
        move_budget(self.step)
    }

    /// Moves toward a strictly better `target`. If the partial move does not
    /// improve on the fish, the fish takes the target state itself.
    fn approach<R: Rng + ?Sized>(
        &self,
        fish: &Fish<S::State>,
        target: Fish<S::State>,
        rng: &mut R,
    ) -> Fish<S::State> {
        let moved = Fish::new(
            self.space,
            self.space
                .move_toward(&fish.state, &target.state, self.steps(), rng),
        );
        if moved.fitness < fish.fitness {
            moved
        } else {
            target
        }
    }

    fn neighbours<'s>(&self, swarm: &'s [Fish<S::State>], me: usize) -> Vec<&'s Fish<S::State>> {
        let fish = &swarm[me];
        swarm
            .iter()
            .enumerate()
            .filter(|&(j, other)| {
                j != me && (self.space.distance(&fish.state, &other.state) as f64) <= self.visual
            })
            .map(|(_, f)| f)
            .collect()
    }

    fn crowded(&self, neighbours: usize, swarm: usize) -> bool {
        neighbours as f64 / swarm as f64 >= self.cfg.delta
    }
}

/// Preying: up to `trynum` random candidates within the field of view.
pub fn prey<S: SearchSpace, R: Rng + ?Sized>(
    ctx: &BehaviorContext<'_, S>,
    fish: &Fish<S::State>,
    rng: &mut R,
) -> Fish<S::State> {
    for _ in 0..ctx.cfg.trynum {
        let cand = Fish::new(
            ctx.space,
            ctx.space.random_neighbor(&fish.state, ctx.visual, rng),
        );
        if cand.fitness < fish.fitness {
            return ctx.approach(fish, cand, rng);
        }
        if ctx.features.sub_optimal
            && ctx.late_phase()
            && cand.fitness <= fish.fitness * (1.0 + ctx.cfg.sub_accept_eps)
            && rng.gen_bool(ctx.cfg.sub_accept_prob)
        {
            return cand;
        }
    }
    if ctx.features.local_fallback {
        Fish::new(ctx.space, ctx.space.local_search(&fish.state))
    } else {
        Fish::new(
            ctx.space,
            ctx.space.random_neighbor(&fish.state, ctx.visual, rng),
        )
    }
}

/// Clustering: move toward the consensus of the visible neighbours when it is
/// better and the neighbourhood is not crowded. `None` means fall back to
/// preying.
pub fn cluster<S: SearchSpace, R: Rng + ?Sized>(
    ctx: &BehaviorContext<'_, S>,
    swarm: &[Fish<S::State>],
    me: usize,
    rng: &mut R,
) -> Option<Fish<S::State>> {
    let fish = &swarm[me];
    let neighbours = ctx.neighbours(swarm, me);
    if neighbours.is_empty() || ctx.crowded(neighbours.len(), swarm.len()) {
        return None;
    }
    let states: Vec<&S::State> = neighbours.iter().map(|f| &f.state).collect();
    let center = Fish::new(ctx.space, ctx.space.center(&states));
    if center.fitness >= fish.fitness {
        return None;
    }
    Some(ctx.approach(fish, center, rng))
}

/// Following: move toward the best visible neighbour under the same crowding
/// rule as [`cluster`].
pub fn follow<S: SearchSpace, R: Rng + ?Sized>(
    ctx: &BehaviorContext<'_, S>,
    swarm: &[Fish<S::State>],
    me: usize,
    rng: &mut R,
) -> Option<Fish<S::State>> {
    let fish = &swarm[me];
    let neighbours = ctx.neighbours(swarm, me);
    if ctx.crowded(neighbours.len(), swarm.len()) {
        return None;
    }
    let best = neighbours
        .into_iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))?;
    if best.fitness >= fish.fitness {
        return None;
    }
    Some(ctx.approach(fish, best.clone(), rng))
}

/// Runs clustering and following, keeps the better success, and preys when
/// both fall back.
pub fn behave<S: SearchSpace, R: Rng + ?Sized>(
    ctx: &BehaviorContext<'_, S>,
    swarm: &[Fish<S::State>],
    me: usize,
    rng: &mut R,
) -> Fish<S::State> {
    let clustered = cluster(ctx, swarm, me, rng);
    let followed = follow(ctx, swarm, me, rng);
    match (clustered, followed) {
        (Some(c), Some(f)) => {
            if f.fitness < c.fitness {
                f
            } else {
                c
            }
        }
        (Some(c), None) => c,
        (None, Some(f)) => f,
        (None, None) => prey(ctx, &swarm[me], rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{DistanceMatrix, Metric};
    use crate::space::TspSpace;
    use crate::tour::{edge_distance, Tour};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(n: usize) -> TspSpace {
        let coords: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / n as f64;
                (10.0 * a.cos(), 10.0 * a.sin())
            })
            .collect();
        TspSpace::new(DistanceMatrix::from_coords(&coords, Metric::RealEuclidean))
    }

    fn ctx<'a>(
        space: &'a TspSpace,
        cfg: &'a SwarmConfig,
        iteration: usize,
    ) -> BehaviorContext<'a, TspSpace> {
        BehaviorContext {
            space,
            cfg,
            features: Features::IMPROVED,
            iteration,
            visual: cfg.visual0,
            step: cfg.step0,
        }
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(schedule_visual(1, 200, 10.0, 10.0, 0.2).unwrap(), 10.0);
        assert!((schedule_visual(200, 200, 7.0, 10.0, 0.2).unwrap() - 2.0).abs() < 1e-12);
        assert!((schedule_visual(101, 201, 8.0, 10.0, 0.2).unwrap() - 4.0).abs() < 1e-12);
        assert!(schedule_visual(1, 1, 8.0, 10.0, 0.2).is_err());
        assert_eq!(schedule_step(1, 200, 6.0, 6.0, 0.2).unwrap(), 6.0);
        let mut step = 6.0;
        for k in 1..=200 {
            step = schedule_step(k, 200, step, 6.0, 0.2).unwrap();
            assert!(step >= 1.2 - 1e-12);
        }
        assert!((step - 1.2).abs() < 1e-12);
    }

    #[test]
    fn logistic_values() {
        assert!((logistic_step(0.3, 4.0).unwrap() - 0.84).abs() < 1e-12);
        assert!((logistic_step(0.84, 4.0).unwrap() - 0.5376).abs() < 1e-12);
        assert_eq!(logistic_step(0.5, 4.0).unwrap(), 1.0);
        assert!(logistic_step(0.0, 4.0).is_err());
        assert!(logistic_step(1.2, 4.0).is_err());
        let z: Vec<f64> = LogisticMap::new(0.3, 4.0).unwrap().take(3).collect();
        assert!((z[0] - 0.84).abs() < 1e-12);
        assert!((z[1] - 0.5376).abs() < 1e-12);
        assert!((z[2] - 0.99434496).abs() < 1e-9);
    }

    #[test]
    fn logistic_seed_avoids_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let x = LogisticMap::random(4.0, &mut rng).state();
            assert!(x > 0.05 && x < 0.95);
            assert!((x - 0.75).abs() > 1e-6 && (x - 0.5).abs() > 1e-6);
        }
    }

    #[test]
    fn bulletin_tracks_stagnation() {
        let mut b = Bulletin::new(Fish {
            state: 0,
            fitness: 5.0,
        });
        assert!(!b.update(&Fish {
            state: 1,
            fitness: 5.0
        }));
        assert!(!b.update(&Fish {
            state: 2,
            fitness: 6.0
        }));
        assert_eq!(b.stop_time, 2);
        assert!(b.update(&Fish {
            state: 3,
            fitness: 4.0
        }));
        assert_eq!(b.stop_time, 0);
        assert_eq!(b.best.state, 3);
    }

    #[test]
    fn chaos_search_keeps_best() {
        let space = ring(8);
        let optimum = Fish::new(&space, Tour::identity(8));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for budget in [1, 5, 20] {
            let out = chaos_search(&space, &optimum, 6.0, 4.0, budget, &mut rng);
            assert!((out.fitness - optimum.fitness).abs() < 1e-9);
        }
        let start = Fish::new(&space, Tour::random(8, &mut rng));
        let out = chaos_search(&space, &start, 6.0, 4.0, 20, &mut rng);
        assert!(out.fitness <= start.fitness);
    }

    #[test]
    fn prey_fallback_is_fixed_point_on_local_optimum() {
        let space = ring(12);
        let cfg = SwarmConfig::default();
        let c = ctx(&space, &cfg, 1);
        let fish = Fish::new(&space, Tour::identity(12));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = prey(&c, &fish, &mut rng);
        assert_eq!(out.fitness, fish.fitness);
        assert_eq!(edge_distance(&out.state, &fish.state).unwrap(), 0);
    }

    #[test]
    fn prey_improves_when_possible() {
        // One adjacent swap away from the ring: a random neighbour that undoes
        // it is easy to find.
        let space = ring(6);
        let cfg = SwarmConfig {
            trynum: 200,
            ..SwarmConfig::default()
        };
        let c = BehaviorContext {
            visual: 1.0,
            step: 1.0,
            ..ctx(&space, &cfg, 1)
        };
        let fish = Fish::new(&space, Tour::new(vec![0, 1, 3, 2, 4, 5]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = prey(&c, &fish, &mut rng);
        assert!(out.fitness < fish.fitness);
    }

    #[test]
    fn early_prey_never_worsens() {
        let space = ring(10);
        let cfg = SwarmConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in [1, 50, 99] {
            let c = ctx(&space, &cfg, k);
            for _ in 0..50 {
                let fish = Fish::new(&space, Tour::random(10, &mut rng));
                assert!(prey(&c, &fish, &mut rng).fitness <= fish.fitness);
            }
        }
    }

    fn swarm_of(space: &TspSpace, tours: &[Vec<usize>]) -> Vec<Fish<Tour>> {
        tours
            .iter()
            .map(|t| Fish::new(space, Tour::new(t.clone()).unwrap()))
            .collect()
    }

    #[test]
    fn cluster_without_neighbours_falls_back() {
        let space = ring(10);
        let cfg = SwarmConfig::default();
        let c = BehaviorContext {
            visual: 1.0,
            ..ctx(&space, &cfg, 1)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let swarm: Vec<Fish<Tour>> = (0..4)
            .map(|_| Fish::new(&space, Tour::random(10, &mut rng)))
            .collect();
        assert!(cluster(&c, &swarm, 0, &mut rng).is_none());
        assert!(follow(&c, &swarm, 0, &mut rng).is_none());
    }

    #[test]
    fn crowded_cluster_falls_back() {
        // Four of five fish are within view of fish 0: 4/5 = 0.8 is crowded.
        let space = ring(8);
        let cfg = SwarmConfig {
            population: 5,
            ..SwarmConfig::default()
        };
        let c = ctx(&space, &cfg, 1);
        let good = vec![0, 1, 2, 3, 4, 5, 6, 7];
        let bad = vec![0, 2, 1, 3, 4, 5, 6, 7];
        let swarm = swarm_of(
            &space,
            &[bad, good.clone(), good.clone(), good.clone(), good],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert!(cluster(&c, &swarm, 0, &mut rng).is_none());
        assert!(follow(&c, &swarm, 0, &mut rng).is_none());
    }

    #[test]
    fn cluster_moves_toward_better_center() {
        // Five fish, 10 cities on a ring; fish 0 has two swaps, its two
        // neighbours in view share the optimal edge set. 2/5 < 0.8.
        let space = ring(10);
        let cfg = SwarmConfig {
            population: 5,
            ..SwarmConfig::default()
        };
        let c = BehaviorContext {
            visual: 5.0,
            ..ctx(&space, &cfg, 1)
        };
        let swarm = swarm_of(
            &space,
            &[
                vec![0, 2, 1, 3, 4, 6, 5, 7, 8, 9],
                vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
                vec![9, 8, 7, 6, 5, 4, 3, 2, 1, 0],
                vec![0, 5, 1, 6, 2, 7, 3, 8, 4, 9],
                vec![0, 3, 6, 9, 2, 5, 8, 1, 4, 7],
            ],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = cluster(&c, &swarm, 0, &mut rng).expect("center is better");
        assert!(out.fitness < swarm[0].fitness);
    }

    #[test]
    fn follow_reduces_distance_to_better_neighbour() {
        let space = ring(12);
        let cfg = SwarmConfig {
            population: 4,
            ..SwarmConfig::default()
        };
        let c = BehaviorContext {
            step: 1.0,
            ..ctx(&space, &cfg, 1)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let best = Tour::identity(12);
        let mut worse = best.order().to_vec();
        worse.swap(2, 3);
        worse.swap(7, 8);
        let swarm = vec![
            Fish::new(&space, Tour::new(worse).unwrap()),
            Fish::new(&space, best.clone()),
            Fish::new(&space, Tour::random(12, &mut rng)),
            Fish::new(&space, Tour::random(12, &mut rng)),
        ];
        let before = edge_distance(&swarm[0].state, &best).unwrap();
        let out = follow(&c, &swarm, 0, &mut rng).expect("better neighbour in view");
        assert!(edge_distance(&out.state, &best).unwrap() < before);
        assert!(out.fitness < swarm[0].fitness);
    }

    #[test]
    fn identical_swarm_follow_falls_back() {
        let space = ring(8);
        let cfg = SwarmConfig {
            population: 3,
            ..SwarmConfig::default()
        };
        let c = ctx(&space, &cfg, 1);
        let t = vec![0, 1, 2, 3, 4, 5, 6, 7];
        let swarm = swarm_of(&space, &[t.clone(), t.clone(), t]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(follow(&c, &swarm, 0, &mut rng).is_none());
    }

    #[test]
    fn behave_falls_back_to_prey_with_same_stream() {
        let space = ring(10);
        let cfg = SwarmConfig::default();
        let c = BehaviorContext {
            visual: 1.0,
            ..ctx(&space, &cfg, 1)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let swarm: Vec<Fish<Tour>> = (0..5)
            .map(|_| Fish::new(&space, Tour::random(10, &mut rng)))
            .collect();
        let mut a = ChaCha8Rng::seed_from_u64(77);
        let mut b = a.clone();
        assert_eq!(behave(&c, &swarm, 0, &mut a), prey(&c, &swarm[0], &mut b));
        let single = vec![swarm[0].clone()];
        let mut a = ChaCha8Rng::seed_from_u64(78);
        let mut b = a.clone();
        assert_eq!(behave(&c, &single, 0, &mut a), prey(&c, &single[0], &mut b));
    }

    #[test]
    fn config_validation() {
        assert!(SwarmConfig::default().validate().is_ok());
        let bad = SwarmConfig {
            population: 2,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SwarmConfig {
            mu: 4.5,
            ..SwarmConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
