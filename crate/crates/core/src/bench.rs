//! Seeded variant × seed matrices and their summary statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::{run, HybridConfig, RunResult, Variant};
use crate::par::{self, Execution};
use crate::space::SearchSpace;

/// Runs every variant once per seed. `jobs` spreads whole runs over threads;
/// each run stays single-worker so results do not depend on it.
pub fn run_variant_matrix<S: SearchSpace>(
    space: &S,
    base: &HybridConfig,
    variants: &[Variant],
    seeds: &[u64],
    jobs: Execution,
) -> Result<Vec<RunResult<S::State>>> {
    let cells: Vec<(Variant, u64)> = variants
        .iter()
        .flat_map(|&v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    par::map_slice(&cells, jobs, |&(variant, seed)| {
        let cfg = HybridConfig {
            variant,
            seed,
            execution: Execution::Sequential,
            ..*base
        };
        run(space, &cfg)
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantStats {
    pub variant: Variant,
    pub runs: usize,
    pub optimal: f64,
    pub worst: f64,
    pub average: f64,
    /// Mean wall time per run in seconds.
    pub avg_time: f64,
}

impl VariantStats {
    /// Summary of `(best_fitness, wall_time)` pairs.
    pub fn from_samples(variant: Variant, samples: &[(f64, f64)]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config(format!("no runs for variant {variant}")));
        }
        let n = samples.len() as f64;
        Ok(Self {
            variant,
            runs: samples.len(),
            optimal: samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min),
            worst: samples
                .iter()
                .map(|s| s.0)
                .fold(f64::NEG_INFINITY, f64::max),
            average: samples.iter().map(|s| s.0).sum::<f64>() / n,
            avg_time: samples.iter().map(|s| s.1).sum::<f64>() / n,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub instance: String,
    pub rows: Vec<VariantStats>,
}

impl BenchReport {
    /// Rows in first-seen variant order.
    pub fn from_runs<T>(instance: impl Into<String>, runs: &[RunResult<T>]) -> Result<Self> {
        let samples: Vec<(Variant, f64, f64)> = runs
            .iter()
            .map(|r| (r.variant, r.best_fitness, r.wall_time))
            .collect();
        Self::from_samples(instance, &samples)
    }

    /// Rebuilds a report from stored histories: the last entry of each
    /// history is that run's best fitness.
    pub fn from_histories(
        instance: impl Into<String>,
        histories: &[(Variant, Vec<f64>, f64)],
    ) -> Result<Self> {
        let samples = histories
            .iter()
            .map(|(v, h, t)| {
                h.last()
                    .map(|&b| (*v, b, *t))
                    .ok_or_else(|| Error::Config(format!("empty history for {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(instance, &samples)
    }

    fn from_samples(instance: impl Into<String>, samples: &[(Variant, f64, f64)]) -> Result<Self> {
        let mut order: Vec<Variant> = Vec::new();
        for (v, _, _) in samples {
            if !order.contains(v) {
                order.push(*v);
            }
        }
        let rows = order
            .into_iter()
            .map(|v| {
                let pts: Vec<(f64, f64)> = samples
                    .iter()
                    .filter(|s| s.0 == v)
                    .map(|s| (s.1, s.2))
                    .collect();
                VariantStats::from_samples(v, &pts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            instance: instance.into(),
            rows,
        })
    }

    pub fn row(&self, variant: Variant) -> Option<&VariantStats> {
        self.rows.iter().find(|r| r.variant == variant)
    }
}
