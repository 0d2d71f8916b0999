//! Result, history, plan and report files. Numbers are written with four
//! decimals.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use fishswarm::bench::BenchReport;
use fishswarm::{CostBreakdown, MtspPlan, RunResult, Tour};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn r4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

pub fn write_history(path: &Path, history: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["iteration", "best_fitness"])?;
    for (i, v) in history.iter().enumerate() {
        w.write_record([(i + 1).to_string(), f4(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Best tour as 1-based city numbers.
pub fn write_solve_result(
    dir: &Path,
    format: Format,
    instance: &str,
    r: &RunResult<Tour>,
) -> Result<()> {
    let tour: Vec<usize> = r.best.order().iter().map(|c| c + 1).collect();
    match format {
        Format::Json => write_json(
            &dir.join("result.json"),
            &json!({
                "instance": instance,
                "variant": r.variant,
                "seed": r.seed,
                "best_fitness": r4(r.best_fitness),
                "iterations_run": r.iterations_run,
                "de_epochs": r.de_epochs,
                "wall_time": r4(r.wall_time),
                "tour": tour,
            }),
        ),
        Format::Csv => {
            let mut w = csv_writer(&dir.join("result.csv"))?;
            w.write_record([
                "instance",
                "variant",
                "seed",
                "best_fitness",
                "iterations_run",
                "wall_time",
                "tour",
            ])?;
            let seq: Vec<String> = tour.iter().map(ToString::to_string).collect();
            w.write_record([
                instance.to_string(),
                r.variant.to_string(),
                r.seed.to_string(),
                f4(r.best_fitness),
                r.iterations_run.to_string(),
                f4(r.wall_time),
                seq.join(" "),
            ])?;
            w.flush()?;
            Ok(())
        }
    }
}

/// One row per group; sites numbered from 1 and the depot as `N + 1`.
pub fn write_plan(path: &Path, plan: &MtspPlan) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["group", "sequence"])?;
    for (g, route) in plan.routes().iter().enumerate() {
        let seq: Vec<String> = route.iter().map(|s| (s + 1).to_string()).collect();
        w.write_record([(g + 1).to_string(), seq.join("-")])?;
    }
    w.flush()?;
    Ok(())
}

const COST_HEADER: [&str; 9] = [
    "group",
    "sites",
    "path_length_km",
    "time_h",
    "days",
    "fuel_cost",
    "staff_cost",
    "other_cost",
    "total_cost",
];

/// Cost table per group plus a total row; the CSV is always written, the
/// JSON copy when requested.
pub fn write_breakdown(dir: &Path, k: usize, format: Format, b: &CostBreakdown) -> Result<()> {
    let mut w = csv_writer(&dir.join(format!("cost_k{k}.csv")))?;
    w.write_record(COST_HEADER)?;
    for (g, row) in b.groups.iter().enumerate() {
        w.write_record([
            (g + 1).to_string(),
            row.sites.to_string(),
            f4(row.distance),
            f4(row.hours),
            row.days.to_string(),
            f4(row.fuel),
            f4(row.personnel),
            f4(row.other),
            f4(row.total),
        ])?;
    }
    let sites: usize = b.groups.iter().map(|g| g.sites).sum();
    let hours: f64 = b.groups.iter().map(|g| g.hours).sum();
    w.write_record([
        "total".to_string(),
        sites.to_string(),
        f4(b.distance),
        f4(hours),
        b.days.to_string(),
        f4(b.fuel),
        f4(b.personnel),
        f4(b.other),
        f4(b.total),
    ])?;
    w.flush()?;
    if format == Format::Json {
        let groups: Vec<_> = b
            .groups
            .iter()
            .enumerate()
            .map(|(g, row)| {
                json!({
                    "group": g + 1,
                    "sites": row.sites,
                    "path_length_km": r4(row.distance),
                    "time_h": r4(row.hours),
                    "days": row.days,
                    "fuel_cost": r4(row.fuel),
                    "staff_cost": r4(row.personnel),
                    "other_cost": r4(row.other),
                    "total_cost": r4(row.total),
                })
            })
            .collect();
        write_json(
            &dir.join(format!("cost_k{k}.json")),
            &json!({
                "k": k,
                "groups": groups,
                "distance": r4(b.distance),
                "days": b.days,
                "fuel_cost": r4(b.fuel),
                "staff_cost": r4(b.personnel),
                "other_cost": r4(b.other),
                "total_cost": r4(b.total),
            }),
        )?;
    }
    Ok(())
}

pub fn write_report(dir: &Path, format: Format, report: &BenchReport) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(&dir.join("report.csv"))?;
            w.write_record(["variant", "runs", "optimal", "worst", "average", "avg_time"])?;
            for row in &report.rows {
                w.write_record([
                    row.variant.to_string(),
                    row.runs.to_string(),
                    f4(row.optimal),
                    f4(row.worst),
                    f4(row.average),
                    f4(row.avg_time),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "variant": row.variant,
                        "runs": row.runs,
                        "optimal": r4(row.optimal),
                        "worst": r4(row.worst),
                        "average": r4(row.average),
                        "avg_time": r4(row.avg_time),
                    })
                })
                .collect();
            write_json(
                &dir.join("report.json"),
                &json!({ "instance": report.instance, "rows": rows }),
            )
        }
    }
}
