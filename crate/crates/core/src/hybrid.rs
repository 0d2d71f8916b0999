//! The full optimisation loop and its ablations.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::afsa::{behave, chaos_search, schedule_step, schedule_visual};
use crate::afsa::{BehaviorContext, Bulletin, Features, Fish, SwarmConfig};
use crate::de::{de_epoch, DeConfig, DeMode};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::space::SearchSpace;

const INIT: u64 = 1;
const BEHAVE: u64 = 2;
const CHAOS: u64 = 3;
const EPOCH: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Afsa,
    Cafsa,
    De,
    DeAfsa,
    DeCafsa,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Afsa,
        Variant::Cafsa,
        Variant::De,
        Variant::DeAfsa,
        Variant::DeCafsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Afsa => "afsa",
            Variant::Cafsa => "cafsa",
            Variant::De => "de",
            Variant::DeAfsa => "de-afsa",
            Variant::DeCafsa => "de-cafsa",
        }
    }

    pub fn features(self) -> Features {
        match self {
            Variant::Afsa | Variant::De | Variant::DeAfsa => Features::BASIC,
            Variant::Cafsa | Variant::DeCafsa => Features::IMPROVED,
        }
    }

    pub fn uses_fish(self) -> bool {
        self != Variant::De
    }

    /// DE mode, if the variant runs DE at all.
    pub fn de_mode(self) -> Option<DeMode> {
        match self {
            Variant::Afsa | Variant::Cafsa => None,
            Variant::De | Variant::DeAfsa => Some(DeMode::RandOnly),
            Variant::DeCafsa => Some(DeMode::MultiPopulation),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub swarm: SwarmConfig,
    pub de: DeConfig,
    /// Iterations without improvement before a DE epoch.
    pub max_time: usize,
    pub variant: Variant,
    pub seed: u64,
    /// How fish of one iteration are evaluated. Results do not depend on it.
    pub execution: Execution,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            swarm: SwarmConfig::default(),
            de: DeConfig::default(),
            max_time: 10,
            variant: Variant::DeCafsa,
            seed: 0,
            execution: Execution::Sequential,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        self.swarm.validate()?;
        self.de.validate()?;
        if self.max_time < 1 {
            return Err(Error::Config("max_time must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<T> {
    pub variant: Variant,
    pub seed: u64,
    pub best: T,
    pub best_fitness: f64,
    /// Best fitness after each iteration.
    pub history: Vec<f64>,
    pub wall_time: f64,
    pub iterations_run: usize,
    /// Iterations (1-based) in which a DE epoch ran.
    pub de_epochs: Vec<usize>,
    /// Stagnation counter observed before the DE check of each iteration.
    pub stop_times: Vec<usize>,
    /// Field of view used in each iteration.
    pub visuals: Vec<f64>,
}

fn best_of<T: Clone>(swarm: &[Fish<T>]) -> (usize, &Fish<T>) {
    swarm
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.fitness.total_cmp(&b.1.fitness))
        .expect("non-empty swarm")
}

/// Runs one variant from random initial states.
pub fn run<S: SearchSpace>(space: &S, cfg: &HybridConfig) -> Result<RunResult<S::State>> {
    cfg.validate()?;
    let start = Instant::now();
    let sw = &cfg.swarm;
    let variant = cfg.variant;
    let features = variant.features();
    let exec = cfg.execution;
    // Trial states get the same local refinement the swarm uses.
    let polish = features.local_fallback;

    let mut swarm: Vec<Fish<S::State>> = par::map_range(sw.population, exec, |i| {
        let mut rng = par::stream_rng(cfg.seed, &[INIT, i as u64]);
        let state = space.random_state(&mut rng);
        Fish::new(space, state)
    });
    let mut bulletin = Bulletin::new(best_of(&swarm).1.clone());

    let mut visual = sw.visual0;
    let mut step = sw.step0;
    let mut history = Vec::with_capacity(sw.max_iter);
    let mut de_epochs = Vec::new();
    let mut stop_times = Vec::with_capacity(sw.max_iter);
    let mut visuals = Vec::with_capacity(sw.max_iter);

    for k in 1..=sw.max_iter {
        visuals.push(visual);
        let mut de_ran = false;
        if variant.uses_fish() {
            let ctx = BehaviorContext {
                space,
                cfg: sw,
                features,
                iteration: k,
                visual,
                step,
            };
            let snapshot = &swarm;
            let next = par::map_range(snapshot.len(), exec, |i| {
                let mut rng = par::stream_rng(cfg.seed, &[BEHAVE, k as u64, i as u64]);
                behave(&ctx, snapshot, i, &mut rng)
            });
            swarm = next;
            if features.chaos {
                let (idx, best) = best_of(&swarm);
                let mut rng = par::stream_rng(cfg.seed, &[CHAOS, k as u64]);
                let refined = chaos_search(space, best, step, sw.mu, sw.chaos_budget, &mut rng);
                swarm[idx] = refined;
            }
        } else if let Some(mode) = variant.de_mode() {
            let mut rng = par::stream_rng(cfg.seed, &[EPOCH, k as u64]);
            swarm = de_epoch(space, &swarm, &cfg.de, mode, polish, &mut rng, exec);
            de_ran = true;
        }

        bulletin.update(best_of(&swarm).1);
        stop_times.push(bulletin.stop_time);

        if de_ran {
            de_epochs.push(k);
        } else if let (true, Some(mode)) = (variant.uses_fish(), variant.de_mode()) {
            if bulletin.stop_time >= cfg.max_time {
                let mut rng = par::stream_rng(cfg.seed, &[EPOCH, k as u64]);
                swarm = de_epoch(space, &swarm, &cfg.de, mode, polish, &mut rng, exec);
                bulletin.offer(best_of(&swarm).1);
                bulletin.stop_time = 0;
                de_epochs.push(k);
            }
        }
        history.push(bulletin.best.fitness);

        if features.adaptive_schedule {
            visual = schedule_visual(k, sw.max_iter, visual, sw.visual0, sw.beta)?;
            step = schedule_step(k, sw.max_iter, step, sw.step0, sw.beta)?;
        }
    }

    Ok(RunResult {
        variant,
        seed: cfg.seed,
        best_fitness: bulletin.best.fitness,
        best: bulletin.best.state,
        history,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: sw.max_iter,
        de_epochs,
        stop_times,
        visuals,
    })
}
