//! `fishswarm`: solve TSP instances and multi-group survey scenarios, and run
//! seeded benchmark matrices.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fishswarm::afsa::SwarmConfig;
use fishswarm::bench::{run_variant_matrix, BenchReport};
use fishswarm::de::DeConfig;
use fishswarm::mtsp::{validate_plan, ResolvedScenario};
use fishswarm::par::Execution;
use fishswarm::{
    datasets, parse_tsplib, HybridConfig, Metric, Scenario, TspInstance, TspSpace, Variant,
};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "fishswarm",
    version,
    about = "Fish swarm + differential evolution route optimiser"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one TSP instance with one variant.
    Solve(SolveArgs),
    /// Optimise a multi-group survey scenario for each group count.
    Mtsp(MtspArgs),
    /// Run every requested variant over a list of seeds.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MetricArg {
    Real,
    Rounded,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Real => Metric::RealEuclidean,
            MetricArg::Rounded => Metric::TsplibRounded,
        }
    }
}

/// Algorithm parameters shared by all subcommands.
#[derive(Args, Debug, Clone)]
struct Tuning {
    /// Maximum iterations.
    #[arg(long)]
    iters: Option<usize>,
    /// Lower limit factor of the visual/step schedules.
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    /// Stagnant iterations before a DE epoch.
    #[arg(long, default_value_t = 10)]
    max_time: usize,
    /// Sub-population proportions, e.g. 0.4,0.3,0.3.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    lambda: Option<Vec<f64>>,
    /// DE scaling factor.
    #[arg(long, default_value_t = 0.5)]
    f: f64,
    /// DE crossover probability.
    #[arg(long, default_value_t = 0.5)]
    cr: f64,
    /// Pull toward the best individual in rand-to-best/1.
    #[arg(long, default_value_t = 0.5)]
    k_de: f64,
    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Tuning {
    fn config(&self, default_iters: usize) -> Result<HybridConfig> {
        let lambdas = match &self.lambda {
            Some(l) => [l[0], l[1], l[2]],
            None => DeConfig::default().lambdas,
        };
        let cfg = HybridConfig {
            swarm: SwarmConfig {
                max_iter: self.iters.unwrap_or(default_iters),
                beta: self.beta,
                ..SwarmConfig::default()
            },
            de: DeConfig {
                f: self.f,
                cr: self.cr,
                k_de: self.k_de,
                lambdas,
            },
            max_time: self.max_time,
            ..HybridConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn execution(&self) -> Execution {
        if self.jobs > 1 {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// TSPLIB file, or `oliver30` / `eil101` for the bundled copies.
    #[arg(long)]
    instance: String,
    #[arg(long, default_value = "de-cafsa")]
    variant: Variant,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "real")]
    metric: MetricArg,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write 0 for timings so repeated runs give identical files.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args, Debug)]
struct MtspArgs {
    /// Scenario JSON file, or `watershed100` for the bundled one.
    #[arg(long)]
    scenario: String,
    /// Group counts; defaults to those listed in the scenario.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long, default_value = "de-cafsa")]
    variant: Variant,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    instance: String,
    /// Variants to compare; all five by default.
    #[arg(long, value_delimiter = ',')]
    variant: Option<Vec<Variant>>,
    /// Explicit seed list.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Number of runs; seeds are `seed..seed + runs` unless listed.
    #[arg(long)]
    runs: Option<usize>,
    /// First seed when `--seeds` is not given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "real")]
    metric: MetricArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    tuning: Tuning,
}

fn load_instance(spec: &str, metric: Metric) -> Result<TspInstance> {
    let path = Path::new(spec);
    let inst = if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        parse_tsplib(&text).with_context(|| format!("parsing {spec}"))?
    } else {
        match spec {
            "oliver30" => datasets::oliver30(),
            "eil101" => datasets::eil101(),
            _ => bail!("instance file {spec} not found"),
        }
    };
    Ok(inst.with_metric(metric))
}

fn load_scenario(spec: &str) -> Result<ResolvedScenario> {
    let scenario = if Path::new(spec).exists() {
        Scenario::load(spec)?
    } else if spec == "watershed100" {
        datasets::watershed100()
    } else {
        bail!("scenario file {spec} not found");
    };
    Ok(scenario.resolve()?)
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        return Ok(pool.install(f));
    }
    let _ = jobs;
    Ok(f())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let inst = load_instance(&args.instance, args.metric.into())?;
    let space = TspSpace::new(inst.distance_matrix());
    let cfg = HybridConfig {
        variant: args.variant,
        seed: args.seed,
        execution: args.tuning.execution(),
        ..args.tuning.config(200)?
    };
    let mut result = with_pool(args.tuning.jobs, || fishswarm::run(&space, &cfg))??;
    if args.no_timing {
        result.wall_time = 0.0;
    }
    std::fs::create_dir_all(&args.out)?;
    output::write_history(&args.out.join("history.csv"), &result.history)?;
    output::write_solve_result(&args.out, args.format, &inst.name, &result)?;
    println!(
        "{} {} seed {}: best {:.4} after {} iterations ({} DE epochs, {:.2} s)",
        inst.name,
        result.variant,
        result.seed,
        result.best_fitness,
        result.iterations_run,
        result.de_epochs.len(),
        result.wall_time
    );
    Ok(())
}

fn cmd_mtsp(args: MtspArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let ks = args.k.clone().unwrap_or_else(|| scenario.ks.clone());
    let base = HybridConfig {
        variant: args.variant,
        seed: args.seed,
        execution: args.tuning.execution(),
        ..args.tuning.config(300)?
    };
    std::fs::create_dir_all(&args.out)?;
    for k in ks {
        let space = scenario.space(k)?;
        let mut result = with_pool(args.tuning.jobs, || fishswarm::run(&space, &base))??;
        if args.no_timing {
            result.wall_time = 0.0;
        }
        if let Err(v) = validate_plan(&result.best, k, scenario.n_sites()) {
            bail!("K = {k}: solver produced an invalid plan: {v:?}");
        }
        let breakdown = space.breakdown(&result.best)?;
        output::write_history(&args.out.join(format!("history_k{k}.csv")), &result.history)?;
        output::write_plan(&args.out.join(format!("plan_k{k}.csv")), &result.best)?;
        output::write_breakdown(&args.out, k, args.format, &breakdown)?;
        let max_hours = breakdown.groups.iter().map(|g| g.hours).fold(0.0, f64::max);
        println!(
            "{} K = {k}: total {:.4}, distance {:.4} km, {} person-days, longest group {:.4} h",
            scenario.name, breakdown.total, breakdown.distance, breakdown.days, max_hours
        );
    }
    Ok(())
}

fn bench_seeds(args: &BenchArgs) -> Result<Vec<u64>> {
    match (&args.seeds, args.runs) {
        (Some(seeds), Some(runs)) if seeds.len() != runs => {
            bail!(
                "--runs {runs} does not match the {} listed seeds",
                seeds.len()
            )
        }
        (Some(seeds), _) => Ok(seeds.clone()),
        (None, runs) => Ok((0..runs.unwrap_or(10) as u64)
            .map(|i| args.seed + i)
            .collect()),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let inst = load_instance(&args.instance, args.metric.into())?;
    let space = TspSpace::new(inst.distance_matrix());
    let variants = args
        .variant
        .clone()
        .unwrap_or_else(|| Variant::ALL.to_vec());
    let seeds = bench_seeds(&args)?;
    if seeds.is_empty() {
        bail!("no seeds to run");
    }
    let base = args.tuning.config(200)?;
    let exec = args.tuning.execution();
    let mut runs = with_pool(args.tuning.jobs, || {
        run_variant_matrix(&space, &base, &variants, &seeds, exec)
    })??;
    if args.no_timing {
        for r in &mut runs {
            r.wall_time = 0.0;
        }
    }
    let report = BenchReport::from_runs(&inst.name, &runs)?;
    std::fs::create_dir_all(args.out.join("histories"))?;
    for r in &runs {
        let name = format!("{}_seed{}.csv", r.variant, r.seed);
        output::write_history(&args.out.join("histories").join(name), &r.history)?;
    }
    output::write_report(&args.out, args.format, &report)?;
    println!(
        "{}: {} variants x {} seeds",
        inst.name,
        variants.len(),
        seeds.len()
    );
    println!(
        "{:<10} {:>12} {:>12} {:>12} {:>10}",
        "variant", "optimal", "worst", "average", "time(s)"
    );
    for row in &report.rows {
        println!(
            "{:<10} {:>12.4} {:>12.4} {:>12.4} {:>10.4}",
            row.variant.name(),
            row.optimal,
            row.worst,
            row.average,
            row.avg_time
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Solve(a) => cmd_solve(a),
        Command::Mtsp(a) => cmd_mtsp(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
