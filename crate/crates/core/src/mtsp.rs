//! Multi-group investigation routes: the depot-rooted plan encoding, the
//! monetary cost model and scenario files.
//!
//! A plan is a permutation of the `N` sites cut into `K` consecutive
//! segments. Every group leaves the shared depot, visits its segment in order
//! and returns. The depot is matrix index `N`, after the sites.

use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::de;
use crate::error::{Error, Result};
use crate::instance::{DistanceMatrix, Metric};
use crate::space::{unit_to_index, SearchSpace};
use crate::tour::{self, Tour};

/// Working hours per day.
pub const HOURS_PER_DAY: f64 = 8.0;

/// Road correction coefficients for site categories 1 to 6.
pub const DEFAULT_KR_TABLE: [f64; 6] = [1.00, 1.10, 1.25, 1.35, 1.45, 1.70];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MtspPlan {
    /// Visiting order of the sites `0..N`.
    pub sites: Vec<usize>,
    /// `K - 1` strictly increasing cut positions in `1..N`.
    pub breaks: Vec<usize>,
    /// Matrix index of the depot, always `N`.
    pub depot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("expected {expected} groups, found {actual}")]
    GroupCount { expected: usize, actual: usize },
    #[error("group {group} is empty")]
    EmptyGroup { group: usize },
    #[error("depot index is {actual}, expected {expected}")]
    WrongDepot { expected: usize, actual: usize },
    #[error("site {site} is visited more than once")]
    DuplicateSite { site: usize },
    #[error("site {site} is never visited")]
    MissingSite { site: usize },
    #[error("site {site} does not exist")]
    UnknownSite { site: usize },
}

/// Checks that `plan` splits all `n` sites into `k` non-empty depot-rooted
/// groups, each site visited exactly once. Every site then has one incoming
/// and one outgoing edge inside its group and the depot starts every group.
pub fn validate_plan(plan: &MtspPlan, k: usize, n: usize) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if plan.breaks.len() + 1 != k {
        out.push(Violation::GroupCount {
            expected: k,
            actual: plan.breaks.len() + 1,
        });
    }
    if plan.depot != n {
        out.push(Violation::WrongDepot {
            expected: n,
            actual: plan.depot,
        });
    }
    let mut prev = 0;
    for (g, &b) in plan
        .breaks
        .iter()
        .chain(std::iter::once(&plan.sites.len()))
        .enumerate()
    {
        if b <= prev {
            out.push(Violation::EmptyGroup { group: g });
        }
        prev = prev.max(b);
    }
    let mut seen = vec![0usize; n];
    for &s in &plan.sites {
        match seen.get_mut(s) {
            Some(c) => *c += 1,
            None => out.push(Violation::UnknownSite { site: s }),
        }
    }
    for (site, &c) in seen.iter().enumerate() {
        match c {
            0 => out.push(Violation::MissingSite { site }),
            1 => {}
            _ => out.push(Violation::DuplicateSite { site }),
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn violations_error(v: Vec<Violation>) -> Error {
    let msg: Vec<String> = v.iter().map(|v| v.to_string()).collect();
    Error::Scenario(format!("invalid plan: {}", msg.join("; ")))
}

impl MtspPlan {
    pub fn new(sites: Vec<usize>, breaks: Vec<usize>) -> Result<Self> {
        let n = sites.len();
        let plan = Self {
            sites,
            breaks,
            depot: n,
        };
        validate_plan(&plan, plan.breaks.len() + 1, n).map_err(violations_error)?;
        Ok(plan)
    }

    pub fn from_groups(groups: &[Vec<usize>]) -> Result<Self> {
        let mut sites = Vec::new();
        let mut breaks = Vec::new();
        for (g, group) in groups.iter().enumerate() {
            if g > 0 {
                breaks.push(sites.len());
            }
            sites.extend_from_slice(group);
        }
        Self::new(sites, breaks)
    }

    /// Random site order with `k - 1` distinct random cut positions.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        let mut sites: Vec<usize> = (0..n).collect();
        sites.shuffle(rng);
        let mut breaks = rand::seq::index::sample(rng, n - 1, k - 1)
            .into_iter()
            .map(|b| b + 1)
            .collect::<Vec<_>>();
        breaks.sort_unstable();
        Self {
            sites,
            breaks,
            depot: n,
        }
    }

    pub fn k(&self) -> usize {
        self.breaks.len() + 1
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn groups(&self) -> Vec<&[usize]> {
        let mut out = Vec::with_capacity(self.k());
        let mut start = 0;
        for &b in self.breaks.iter().chain(std::iter::once(&self.sites.len())) {
            out.push(&self.sites[start..b]);
            start = b;
        }
        out
    }

    /// Closed routes, depot first and last.
    pub fn routes(&self) -> Vec<Vec<usize>> {
        self.groups()
            .into_iter()
            .map(|g| {
                let mut r = Vec::with_capacity(g.len() + 2);
                r.push(self.depot);
                r.extend_from_slice(g);
                r.push(self.depot);
                r
            })
            .collect()
    }
}

impl fmt::Display for MtspPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, route) in self.routes().iter().enumerate() {
            let seq: Vec<String> = route.iter().map(|s| (s + 1).to_string()).collect();
            writeln!(f, "{}: {}", g + 1, seq.join("-"))?;
        }
        Ok(())
    }
}

/// Sorts cut positions and pushes them apart so all `n` sites fall into
/// non-empty segments.
pub(crate) fn repair_breaks(breaks: &mut [usize], n: usize) {
    breaks.sort_unstable();
    let m = breaks.len();
    for i in 0..m {
        let lo = if i == 0 { 1 } else { breaks[i - 1] + 1 };
        breaks[i] = breaks[i].max(lo);
    }
    for i in (0..m).rev() {
        let hi = if i + 1 == m { n - 1 } else { breaks[i + 1] - 1 };
        breaks[i] = breaks[i].min(hi);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KrMode {
    /// One coefficient of 1 applied to the total distance.
    #[default]
    AggregateUnity,
    /// Each edge weighted by the coefficient of its destination's road type.
    PerEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostParams {
    /// Fuel price per litre.
    pub fuel_price: f64,
    /// Litres per 100 km.
    pub fuel_per_100km: f64,
    /// Per person and day.
    pub daily_cost: f64,
    pub group_size: u32,
    pub toll_per_km: f64,
    pub parking_fee: f64,
    /// km per hour.
    pub speed: f64,
    pub hours_per_site: f64,
    /// Road type (1 to 6) of every site, required in per-edge mode.
    pub road_types: Vec<u8>,
    pub depot_road_type: Option<u8>,
    pub kr_table: [f64; 6],
    pub kr_mode: KrMode,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            fuel_price: 7.0,
            fuel_per_100km: 7.0,
            daily_cost: 250.0,
            group_size: 2,
            toll_per_km: 0.45,
            parking_fee: 20.0,
            speed: 70.0,
            hours_per_site: 1.0,
            road_types: Vec::new(),
            depot_road_type: None,
            kr_table: DEFAULT_KR_TABLE,
            kr_mode: KrMode::AggregateUnity,
        }
    }
}

impl CostParams {
    /// All rates zero; speed stays positive.
    pub fn zero() -> Self {
        Self {
            fuel_price: 0.0,
            fuel_per_100km: 0.0,
            daily_cost: 0.0,
            group_size: 0,
            toll_per_km: 0.0,
            parking_fee: 0.0,
            hours_per_site: 0.0,
            ..Self::default()
        }
    }

    /// Checks rates and, in per-edge mode, that `n` sites and the depot have
    /// road types.
    pub fn validate(&self, n: usize) -> Result<()> {
        let rates = [
            self.fuel_price,
            self.fuel_per_100km,
            self.daily_cost,
            self.toll_per_km,
            self.parking_fee,
            self.hours_per_site,
        ];
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::Config(
                "cost rates must be finite and non-negative".into(),
            ));
        }
        if self.speed.is_nan() || self.speed <= 0.0 {
            return Err(Error::Config("speed must be positive".into()));
        }
        if self.kr_table.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::Config(
                "road coefficients must be non-negative".into(),
            ));
        }
        let known = |t: u8| (1..=6).contains(&t);
        if let Some(bad) = self
            .road_types
            .iter()
            .chain(&self.depot_road_type)
            .find(|&&t| !known(t))
        {
            return Err(Error::Config(format!("road type {bad} outside 1..=6")));
        }
        if self.kr_mode == KrMode::PerEdge {
            if self.road_types.len() < n {
                return Err(Error::MissingRoadType {
                    site: self.road_types.len(),
                });
            }
            if self.depot_road_type.is_none() {
                return Err(Error::MissingRoadType { site: n });
            }
        }
        Ok(())
    }

    fn kr(&self, site: usize, depot: usize) -> Result<f64> {
        let t = if site == depot {
            self.depot_road_type
        } else {
            self.road_types.get(site).copied()
        };
        t.map(|t| self.kr_table[usize::from(t) - 1])
            .ok_or(Error::MissingRoadType { site })
    }
}

/// Distance and size of one group, the inputs of its cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub distance: f64,
    pub sites: usize,
    /// Distance weighted by road coefficients; equals `distance` when no
    /// per-edge weighting applies.
    pub fuel_distance: f64,
}

impl GroupSummary {
    pub fn new(distance: f64, sites: usize) -> Self {
        Self {
            distance,
            sites,
            fuel_distance: distance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupCost {
    pub distance: f64,
    pub sites: usize,
    pub hours: f64,
    pub days: u64,
    pub fuel: f64,
    pub personnel: f64,
    pub other: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub groups: Vec<GroupCost>,
    /// Total distance D in km.
    pub distance: f64,
    /// Person-day count T.
    pub days: u64,
    pub fuel: f64,
    pub personnel: f64,
    pub other: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonDays {
    pub total: u64,
    pub hours: Vec<f64>,
    pub days: Vec<u64>,
}

/// Days charged for `hours` of work: started days count in full.
pub fn days_for(hours: f64) -> u64 {
    (hours / HOURS_PER_DAY).floor() as u64 + 1
}

fn check_matrix(plan: &MtspPlan, d: &DistanceMatrix) -> Result<()> {
    if d.len() != plan.depot + 1 {
        return Err(Error::DimensionMismatch {
            expected: plan.depot + 1,
            actual: d.len(),
        });
    }
    Ok(())
}

fn route_distance(d: &DistanceMatrix, depot: usize, group: &[usize]) -> f64 {
    let (Some(&first), Some(&last)) = (group.first(), group.last()) else {
        return 0.0;
    };
    let inner: f64 = group.windows(2).map(|w| d.get(w[0], w[1])).sum();
    d.get(depot, first) + inner + d.get(last, depot)
}

fn fuel_route_distance(
    d: &DistanceMatrix,
    depot: usize,
    group: &[usize],
    params: &CostParams,
) -> Result<f64> {
    let mut prev = depot;
    let mut total = 0.0;
    for &s in group.iter().chain(std::iter::once(&depot)) {
        total += d.get(prev, s) * params.kr(s, depot)?;
        prev = s;
    }
    Ok(total)
}

/// Per-group distances and site counts of `plan`.
pub fn summarize(
    plan: &MtspPlan,
    d: &DistanceMatrix,
    params: &CostParams,
) -> Result<Vec<GroupSummary>> {
    check_matrix(plan, d)?;
    plan.groups()
        .into_iter()
        .map(|g| {
            let distance = route_distance(d, plan.depot, g);
            let fuel_distance = match params.kr_mode {
                KrMode::AggregateUnity => distance,
                KrMode::PerEdge => fuel_route_distance(d, plan.depot, g, params)?,
            };
            Ok(GroupSummary {
                distance,
                sites: g.len(),
                fuel_distance,
            })
        })
        .collect()
}

/// Total distance D and the per-group closed-route distances.
pub fn total_distance(plan: &MtspPlan, d: &DistanceMatrix) -> Result<(f64, Vec<f64>)> {
    check_matrix(plan, d)?;
    let per: Vec<f64> = plan
        .groups()
        .into_iter()
        .map(|g| route_distance(d, plan.depot, g))
        .collect();
    Ok((per.iter().sum(), per))
}

fn group_fuel(g: &GroupSummary, params: &CostParams) -> f64 {
    let km = match params.kr_mode {
        KrMode::AggregateUnity => g.distance,
        KrMode::PerEdge => g.fuel_distance,
    };
    params.fuel_price * params.fuel_per_100km * km / 100.0
}

fn group_hours(g: &GroupSummary, params: &CostParams) -> Result<f64> {
    if params.speed.is_nan() || params.speed <= 0.0 {
        return Err(Error::Config("speed must be positive".into()));
    }
    Ok(g.distance / params.speed + g.sites as f64 * params.hours_per_site)
}

/// Fuel cost C1.
pub fn fuel_cost(plan: &MtspPlan, d: &DistanceMatrix, params: &CostParams) -> Result<f64> {
    Ok(summarize(plan, d, params)?
        .iter()
        .map(|g| group_fuel(g, params))
        .sum())
}

/// Working hours and charged days per group and the day total T.
pub fn person_days(plan: &MtspPlan, d: &DistanceMatrix, params: &CostParams) -> Result<PersonDays> {
    let mut hours = Vec::new();
    for g in summarize(plan, d, params)? {
        hours.push(group_hours(&g, params)?);
    }
    let days: Vec<u64> = hours.iter().map(|&h| days_for(h)).collect();
    Ok(PersonDays {
        total: days.iter().sum(),
        hours,
        days,
    })
}

/// Personnel cost C2 for `days` group-days.
pub fn personnel_cost(days: u64, params: &CostParams) -> f64 {
    params.daily_cost * days as f64 * f64::from(params.group_size)
}

/// Tolls and parking, C3.
pub fn other_cost(plan: &MtspPlan, d: &DistanceMatrix, params: &CostParams) -> Result<f64> {
    let (total, _) = total_distance(plan, d)?;
    Ok(params.toll_per_km * total + params.parking_fee * plan.n_sites() as f64)
}

/// Full breakdown from per-group distances and site counts.
pub fn breakdown_from_groups(
    groups: &[GroupSummary],
    params: &CostParams,
) -> Result<CostBreakdown> {
    let mut rows = Vec::with_capacity(groups.len());
    for g in groups {
        let hours = group_hours(g, params)?;
        let days = days_for(hours);
        let fuel = group_fuel(g, params);
        let personnel = personnel_cost(days, params);
        let other = params.toll_per_km * g.distance + params.parking_fee * g.sites as f64;
        rows.push(GroupCost {
            distance: g.distance,
            sites: g.sites,
            hours,
            days,
            fuel,
            personnel,
            other,
            total: fuel + personnel + other,
        });
    }
    let fuel: f64 = rows.iter().map(|r| r.fuel).sum();
    let personnel: f64 = rows.iter().map(|r| r.personnel).sum();
    let other: f64 = rows.iter().map(|r| r.other).sum();
    Ok(CostBreakdown {
        distance: rows.iter().map(|r| r.distance).sum(),
        days: rows.iter().map(|r| r.days).sum(),
        fuel,
        personnel,
        other,
        total: fuel + personnel + other,
        groups: rows,
    })
}

pub fn total_cost(
    plan: &MtspPlan,
    d: &DistanceMatrix,
    params: &CostParams,
) -> Result<CostBreakdown> {
    breakdown_from_groups(&summarize(plan, d, params)?, params)
}

/// Moves the cut `i` by `delta` positions if both neighbouring segments stay
/// non-empty.
pub fn shift_break(plan: &MtspPlan, i: usize, delta: isize) -> Option<MtspPlan> {
    let n = plan.n_sites();
    let b = *plan.breaks.get(i)?;
    let lo = if i == 0 { 1 } else { plan.breaks[i - 1] + 1 };
    let hi = if i + 1 == plan.breaks.len() {
        n - 1
    } else {
        plan.breaks[i + 1] - 1
    };
    let nb = b.checked_add_signed(delta)?;
    if nb < lo || nb > hi || nb == b {
        return None;
    }
    let mut out = plan.clone();
    out.breaks[i] = nb;
    Some(out)
}

/// Moves the site at position `pos` into group `to`, before its `at`-th
/// member. Refuses to empty the source group.
pub fn relocate_site(plan: &MtspPlan, pos: usize, to: usize, at: usize) -> Option<MtspPlan> {
    let mut groups: Vec<Vec<usize>> = plan.groups().into_iter().map(<[usize]>::to_vec).collect();
    let from = plan.breaks.partition_point(|&b| b <= pos);
    if pos >= plan.n_sites() || to >= groups.len() || from == to || groups[from].len() < 2 {
        return None;
    }
    let offset = if from == 0 { 0 } else { plan.breaks[from - 1] };
    let site = groups[from].remove(pos - offset);
    let at = at.min(groups[to].len());
    groups[to].insert(at, site);
    let mut sites = Vec::with_capacity(plan.n_sites());
    let mut breaks = Vec::with_capacity(plan.breaks.len());
    for (g, group) in groups.iter().enumerate() {
        if g > 0 {
            breaks.push(sites.len());
        }
        sites.extend_from_slice(group);
    }
    Some(MtspPlan {
        sites,
        breaks,
        depot: plan.depot,
    })
}

fn random_shift<R: Rng + ?Sized>(plan: &MtspPlan, rng: &mut R) -> Option<MtspPlan> {
    let i = rng.gen_range(0..plan.breaks.len());
    let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
    shift_break(plan, i, delta).or_else(|| shift_break(plan, i, -delta))
}

fn random_relocation<R: Rng + ?Sized>(plan: &MtspPlan, rng: &mut R) -> Option<MtspPlan> {
    let groups = plan.groups();
    let movable: Vec<usize> = (0..plan.n_sites())
        .filter(|&p| groups[plan.breaks.partition_point(|&b| b <= p)].len() > 1)
        .collect();
    let &pos = movable.choose(rng)?;
    let from = plan.breaks.partition_point(|&b| b <= pos);
    let mut to = rng.gen_range(0..plan.k() - 1);
    if to >= from {
        to += 1;
    }
    let at = rng.gen_range(0..=groups[to].len());
    relocate_site(plan, pos, to, at)
}

/// One random move: a reversal in the site order, a cut shift or a
/// relocation between groups.
pub fn random_move<R: Rng + ?Sized>(plan: &MtspPlan, rng: &mut R) -> MtspPlan {
    let kinds = if plan.k() > 1 { 3 } else { 1 };
    let moved = match rng.gen_range(0..kinds) {
        1 => random_shift(plan, rng),
        2 => random_relocation(plan, rng),
        _ => None,
    };
    moved.unwrap_or_else(|| {
        let mut out = plan.clone();
        tour::random_reversal(&mut out.sites, rng);
        out
    })
}

fn break_distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// One unit of cut movement toward `target`. Moving the rightmost cut that
/// must go right, or the leftmost that must go left, never collides.
fn break_step(breaks: &mut [usize], target: &[usize]) -> bool {
    if let Some(i) = (0..breaks.len()).rev().find(|&i| breaks[i] < target[i]) {
        breaks[i] += 1;
        return true;
    }
    if let Some(i) = (0..breaks.len()).find(|&i| breaks[i] > target[i]) {
        breaks[i] -= 1;
        return true;
    }
    false
}

/// Intra-group 2-opt on the closed depot route; the result starts at the
/// depot.
fn improve_route(d: &DistanceMatrix, depot: usize, group: &[usize], passes: usize) -> Vec<usize> {
    let mut route = Vec::with_capacity(group.len() + 1);
    route.push(depot);
    route.extend_from_slice(group);
    tour::two_opt_in_place(&mut route, |a, b| d.get(a, b), passes);
    let at = route
        .iter()
        .position(|&s| s == depot)
        .expect("depot stays in route");
    route.rotate_left(at);
    route.remove(0);
    route
}

/// The plan search space for a fixed group count.
#[derive(Debug, Clone)]
pub struct MtspSpace {
    d: DistanceMatrix,
    sites_d: DistanceMatrix,
    params: CostParams,
    k: usize,
    n: usize,
}

impl MtspSpace {
    /// `d` covers the `N` sites followed by the depot, in km.
    pub fn new(d: DistanceMatrix, params: CostParams, k: usize) -> Result<Self> {
        if d.len() < 2 {
            return Err(Error::Scenario(
                "at least one site and the depot are required".into(),
            ));
        }
        let n = d.len() - 1;
        if k == 0 || k > n {
            return Err(Error::Config(format!(
                "group count {k} must lie in 1..={n}"
            )));
        }
        params.validate(n)?;
        let rows = (0..n).map(|i| d.row(i)[..n].to_vec()).collect();
        let sites_d = DistanceMatrix::from_rows(rows)?;
        Ok(Self {
            d,
            sites_d,
            params,
            k,
            n,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.d
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }

    pub fn breakdown(&self, plan: &MtspPlan) -> Result<CostBreakdown> {
        total_cost(plan, &self.d, &self.params)
    }

    fn group_cost(&self, group: &[usize]) -> f64 {
        let plan = MtspPlan {
            sites: group.to_vec(),
            breaks: Vec::new(),
            depot: self.n,
        };
        let summary = GroupSummary {
            distance: route_distance(&self.d, self.n, group),
            sites: group.len(),
            fuel_distance: match self.params.kr_mode {
                KrMode::AggregateUnity => route_distance(&self.d, self.n, group),
                KrMode::PerEdge => fuel_route_distance(&self.d, plan.depot, group, &self.params)
                    .expect("road types validated"),
            },
        };
        breakdown_from_groups(&[summary], &self.params)
            .expect("params validated")
            .total
    }
}

impl SearchSpace for MtspSpace {
    type State = MtspPlan;

    fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> MtspPlan {
        MtspPlan::random(self.n, self.k, rng)
    }

    fn fitness(&self, s: &MtspPlan) -> f64 {
        s.groups().into_iter().map(|g| self.group_cost(g)).sum()
    }

    fn distance(&self, a: &MtspPlan, b: &MtspPlan) -> usize {
        tour::edge_distance_raw(&a.sites, &tour::adjacency(&b.sites))
            + break_distance(&a.breaks, &b.breaks)
    }

    fn random_neighbor<R: Rng + ?Sized>(&self, s: &MtspPlan, visual: f64, rng: &mut R) -> MtspPlan {
        let m = rng.gen_range(1..=tour::move_budget(visual / 2.0));
        let mut out = s.clone();
        for _ in 0..m {
            out = random_move(&out, rng);
        }
        out
    }

    fn move_toward<R: Rng + ?Sized>(
        &self,
        s: &MtspPlan,
        target: &MtspPlan,
        steps: usize,
        rng: &mut R,
    ) -> MtspPlan {
        let mut out = s.clone();
        let target_adj = tour::adjacency(&target.sites);
        for _ in 0..steps {
            let sd = tour::edge_distance_raw(&out.sites, &target_adj);
            let bd = break_distance(&out.breaks, &target.breaks);
            if sd + bd == 0 {
                break;
            }
            let moved = if rng.gen_range(0..sd + bd) < bd {
                break_step(&mut out.breaks, &target.breaks)
            } else {
                tour::guided_step(&mut out.sites, &target_adj, rng)
            };
            if !moved {
                break;
            }
        }
        out
    }

    fn center(&self, neighbors: &[&MtspPlan]) -> MtspPlan {
        let tours: Vec<Tour> = neighbors
            .iter()
            .map(|p| Tour::from_vec_unchecked(p.sites.clone()))
            .collect();
        let refs: Vec<&Tour> = tours.iter().collect();
        let sites = tour::swarm_center(&refs, &self.sites_d)
            .expect("non-empty neighbour list")
            .into_inner();
        let mut breaks: Vec<usize> = (0..self.k - 1)
            .map(|i| {
                let mut col: Vec<usize> = neighbors.iter().map(|p| p.breaks[i]).collect();
                col.sort_unstable();
                col[(col.len() - 1) / 2]
            })
            .collect();
        repair_breaks(&mut breaks, self.n);
        MtspPlan {
            sites,
            breaks,
            depot: self.n,
        }
    }

    fn local_search(&self, s: &MtspPlan) -> MtspPlan {
        let mut sites = Vec::with_capacity(self.n);
        for g in s.groups() {
            let improved = improve_route(&self.d, self.n, g, 4 * g.len() + 4);
            if self.group_cost(&improved) <= self.group_cost(g) {
                sites.extend(improved);
            } else {
                sites.extend_from_slice(g);
            }
        }
        MtspPlan {
            sites,
            breaks: s.breaks.clone(),
            depot: self.n,
        }
    }

    fn chaotic_move(&self, s: &MtspPlan, a: f64, b: f64) -> MtspPlan {
        let (i, j) = (unit_to_index(a, self.n), unit_to_index(b, self.n));
        if i == j {
            if s.breaks.is_empty() {
                return s.clone();
            }
            let delta = if b * (self.n as f64) - (j as f64) < 0.5 {
                -1
            } else {
                1
            };
            return shift_break(s, i % s.breaks.len(), delta).unwrap_or_else(|| s.clone());
        }
        let (i, j) = (i.min(j), i.max(j));
        let mut out = s.clone();
        out.sites[i..=j].reverse();
        out
    }

    fn de_combine(&self, base: &MtspPlan, from: &MtspPlan, to: &MtspPlan, scale: f64) -> MtspPlan {
        let seq = de::SwapSequence::new(de::swap_sequence_raw(&from.sites, &to.sites));
        let mut sites = base.sites.clone();
        de::scale_sequence(&seq, scale).apply_in_place(&mut sites);
        let mut breaks: Vec<usize> = base
            .breaks
            .iter()
            .zip(from.breaks.iter().zip(&to.breaks))
            .map(|(&b, (&f, &t))| {
                let moved = b as f64 + (scale * (t as f64 - f as f64)).round();
                moved.max(0.0) as usize
            })
            .collect();
        repair_breaks(&mut breaks, self.n);
        MtspPlan {
            sites,
            breaks,
            depot: self.n,
        }
    }

    fn crossover<R: Rng + ?Sized>(
        &self,
        x: &MtspPlan,
        v: &MtspPlan,
        cr: f64,
        rng: &mut R,
    ) -> MtspPlan {
        let mask = de::crossover_mask(self.n, cr, rng);
        let sites = de::cross_with_mask(&x.sites, &v.sites, &mask);
        let mut breaks: Vec<usize> = x
            .breaks
            .iter()
            .zip(&v.breaks)
            .map(|(&a, &b)| if rng.gen::<f64>() <= cr { b } else { a })
            .collect();
        repair_breaks(&mut breaks, self.n);
        MtspPlan {
            sites,
            breaks,
            depot: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DepotSpec {
    Coords([f64; 2]),
    /// Index into the scenario's site list; that entry becomes the depot.
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupCounts {
    One(usize),
    Many(Vec<usize>),
}

impl GroupCounts {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            GroupCounts::One(k) => vec![*k],
            GroupCounts::Many(ks) => ks.clone(),
        }
    }
}

fn default_scale() -> f64 {
    1.0
}

/// Scenario file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub depot: DepotSpec,
    pub sites: Vec<[f64; 2]>,
    pub k: GroupCounts,
    #[serde(default)]
    pub metric: Metric,
    /// Kilometres per coordinate unit.
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub params: CostParams,
}

/// A scenario with the depot moved behind the sites and distances in km.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub name: String,
    /// Sites followed by the depot.
    pub coords: Vec<(f64, f64)>,
    pub ks: Vec<usize>,
    pub params: CostParams,
    pub matrix: DistanceMatrix,
}

impl ResolvedScenario {
    pub fn n_sites(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn space(&self, k: usize) -> Result<MtspSpace> {
        MtspSpace::new(self.matrix.clone(), self.params.clone(), k)
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedScenario> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Scenario("scale must be positive".into()));
        }
        let mut coords: Vec<(f64, f64)> = self.sites.iter().map(|p| (p[0], p[1])).collect();
        let mut params = self.params.clone();
        let depot = match self.depot {
            DepotSpec::Coords(p) => (p[0], p[1]),
            DepotSpec::Index(i) => {
                if i >= coords.len() {
                    return Err(Error::Scenario(format!("depot index {i} out of range")));
                }
                if i < params.road_types.len() {
                    let t = params.road_types.remove(i);
                    params.depot_road_type.get_or_insert(t);
                }
                coords.remove(i)
            }
        };
        if coords.is_empty() {
            return Err(Error::Scenario("scenario has no sites".into()));
        }
        coords.push(depot);
        let n = coords.len() - 1;
        let ks = self.k.to_vec();
        if ks.is_empty() {
            return Err(Error::Scenario("no group count given".into()));
        }
        if let Some(bad) = ks.iter().find(|&&k| k == 0 || k > n) {
            return Err(Error::Scenario(format!(
                "group count {bad} must lie in 1..={n}"
            )));
        }
        params.validate(n)?;
        let matrix = DistanceMatrix::from_coords(&coords, self.metric).scaled(self.scale);
        Ok(ResolvedScenario {
            name: self.name.clone(),
            coords,
            ks,
            params,
            matrix,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn scheme_one_groups() {
        let p = CostParams::default();
        let b = breakdown_from_groups(
            &[
                GroupSummary::new(1866.6778, 60),
                GroupSummary::new(1381.9055, 40),
            ],
            &p,
        )
        .unwrap();
        let g = &b.groups;
        assert!(close(g[0].fuel, 914.6721, 1e-3));
        assert!(close(g[1].fuel, 677.1337, 1e-3));
        assert!(close(g[0].hours, 86.6668, 1e-3));
        assert!(close(g[1].hours, 59.7415, 1e-3));
        assert_eq!((g[0].days, g[1].days), (11, 8));
        assert!(close(g[0].personnel, 5500.0, 1e-9));
        assert!(close(g[1].personnel, 4000.0, 1e-9));
        assert!(close(g[0].other, 2040.005, 1e-3));
        assert!(close(g[1].other, 1421.8575, 1e-3));
        assert!(close(b.distance, 3248.5833, 1e-9));
        assert_eq!(b.days, 19);
        assert!(close(b.total, 14553.6683, 1e-2));
        assert_eq!(b.total, b.fuel + b.personnel + b.other);
    }

    #[test]
    fn day_boundary_settles_upward() {
        assert_eq!(days_for(8.0), 2);
        assert_eq!(days_for(7.999), 1);
        assert_eq!(days_for(0.0), 1);
        assert_eq!(personnel_cost(0, &CostParams::default()), 0.0);
        assert_eq!(personnel_cost(19, &CostParams::default()), 9500.0);
    }

    fn line_scenario() -> (DistanceMatrix, usize) {
        // Sites 0..4 on a line at x = 1..=4, depot at the origin.
        let mut coords: Vec<(f64, f64)> = (1..=4).map(|x| (x as f64, 0.0)).collect();
        coords.push((0.0, 0.0));
        (
            DistanceMatrix::from_coords(&coords, Metric::RealEuclidean),
            4,
        )
    }

    #[test]
    fn distances_and_routes() {
        let (d, n) = line_scenario();
        let plan = MtspPlan::from_groups(&[vec![0, 1], vec![3, 2]]).unwrap();
        assert_eq!(plan.depot, n);
        assert_eq!(plan.routes(), vec![vec![4, 0, 1, 4], vec![4, 3, 2, 4]]);
        let (total, per) = total_distance(&plan, &d).unwrap();
        assert_eq!(per, vec![4.0, 8.0]);
        assert_eq!(total, 12.0);
        assert_eq!(plan.to_string(), "1: 5-1-2-5\n2: 5-4-3-5\n");
        let single = MtspPlan::new(vec![2, 0, 3, 1], vec![]).unwrap();
        let (t, _) = total_distance(&single, &d).unwrap();
        let mut with_depot = vec![4];
        with_depot.extend(&single.sites);
        let tour_len = Tour::new(with_depot).unwrap().length(&d);
        assert_eq!(t, tour_len);
    }

    #[test]
    fn symmetric_singletons() {
        let coords = vec![(3.0, 0.0), (-3.0, 0.0), (0.0, 0.0)];
        let d = DistanceMatrix::from_coords(&coords, Metric::RealEuclidean);
        let plan = MtspPlan::from_groups(&[vec![0], vec![1]]).unwrap();
        assert_eq!(total_distance(&plan, &d).unwrap().0, 12.0);
    }

    #[test]
    fn per_edge_fuel() {
        // One site of type 6 at 50 km; the depot is type 1. Out 50 km at 1.70,
        // back 50 km at 1.00.
        let d = DistanceMatrix::from_coords(&[(50.0, 0.0), (0.0, 0.0)], Metric::RealEuclidean);
        let params = CostParams {
            road_types: vec![6],
            depot_road_type: Some(1),
            kr_mode: KrMode::PerEdge,
            ..CostParams::default()
        };
        let plan = MtspPlan::new(vec![0], vec![]).unwrap();
        let c1 = fuel_cost(&plan, &d, &params).unwrap();
        assert!(close(c1, 7.0 * 7.0 / 100.0 * (50.0 * 1.70 + 50.0), 1e-9));
        let missing = CostParams {
            road_types: vec![],
            ..params.clone()
        };
        assert_eq!(
            fuel_cost(&plan, &d, &missing),
            Err(Error::MissingRoadType { site: 0 })
        );
        assert!(missing.validate(1).is_err());
        let aggregate = CostParams::default();
        assert!(close(
            fuel_cost(&plan, &d, &aggregate).unwrap(),
            0.49 * 100.0,
            1e-9
        ));
    }

    #[test]
    fn zero_rates_cost_nothing() {
        let (d, _) = line_scenario();
        let plan = MtspPlan::from_groups(&[vec![2], vec![0, 3, 1]]).unwrap();
        let b = total_cost(&plan, &d, &CostParams::zero()).unwrap();
        assert_eq!(b.total, 0.0);
        assert!(b.groups.iter().all(|g| g.days >= 1));
    }

    #[test]
    fn zero_speed_is_an_error() {
        let (d, _) = line_scenario();
        let plan = MtspPlan::new(vec![0, 1, 2, 3], vec![]).unwrap();
        let p = CostParams {
            speed: 0.0,
            ..CostParams::default()
        };
        assert!(person_days(&plan, &d, &p).is_err());
    }

    #[test]
    fn validation_names_the_problem() {
        let plan = MtspPlan {
            sites: vec![0, 1, 1, 3],
            breaks: vec![2],
            depot: 4,
        };
        let v = validate_plan(&plan, 2, 4).unwrap_err();
        assert!(v.contains(&Violation::DuplicateSite { site: 1 }));
        assert!(v.contains(&Violation::MissingSite { site: 2 }));
        let empty = MtspPlan {
            sites: vec![0, 1, 2, 3],
            breaks: vec![2, 2],
            depot: 4,
        };
        assert!(validate_plan(&empty, 3, 4)
            .unwrap_err()
            .contains(&Violation::EmptyGroup { group: 1 }));
        let singletons = MtspPlan::from_groups(&[vec![3], vec![1], vec![0], vec![2]]).unwrap();
        assert!(validate_plan(&singletons, 4, 4).is_ok());
        assert!(validate_plan(&singletons, 3, 4).is_err());
    }

    #[test]
    fn break_shift_keeps_groups_non_empty() {
        let plan = MtspPlan::new(vec![0, 1, 2], vec![1]).unwrap();
        assert!(shift_break(&plan, 0, -1).is_none());
        let right = shift_break(&plan, 0, 1).unwrap();
        assert_eq!(right.breaks, vec![2]);
        assert!(shift_break(&right, 0, 1).is_none());
    }

    #[test]
    fn relocation_moves_one_site() {
        let plan = MtspPlan::from_groups(&[vec![0, 1], vec![2, 3]]).unwrap();
        let moved = relocate_site(&plan, 1, 1, 0).unwrap();
        assert_eq!(moved.groups(), vec![&[0][..], &[1, 2, 3][..]]);
        assert!(relocate_site(&moved, 0, 1, 0).is_none());
    }

    #[test]
    fn repair_spreads_cuts() {
        let mut b = vec![3, 1, 1];
        repair_breaks(&mut b, 5);
        assert_eq!(b, vec![1, 2, 3]);
        let mut b = vec![9, 9];
        repair_breaks(&mut b, 5);
        assert_eq!(b, vec![3, 4]);
    }

    fn space(n: usize, k: usize) -> MtspSpace {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let coords: Vec<(f64, f64)> = (0..=n)
            .map(|_| (rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0)))
            .collect();
        MtspSpace::new(
            DistanceMatrix::from_coords(&coords, Metric::RealEuclidean),
            CostParams::default(),
            k,
        )
        .unwrap()
    }

    #[test]
    fn space_operations_keep_plans_valid() {
        let s = space(12, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let plans: Vec<MtspPlan> = (0..6).map(|_| s.random_state(&mut rng)).collect();
        let ok = |p: &MtspPlan| assert!(validate_plan(p, 3, 12).is_ok(), "{p:?}");
        for p in &plans {
            ok(p);
            ok(&s.random_neighbor(p, 10.0, &mut rng));
            ok(&s.move_toward(p, &plans[0], 6, &mut rng));
            ok(&s.local_search(p));
            ok(&s.chaotic_move(p, rng.gen(), rng.gen()));
            ok(&s.de_combine(p, &plans[1], &plans[2], 0.5));
            ok(&s.crossover(p, &plans[3], 0.5, &mut rng));
        }
        let refs: Vec<&MtspPlan> = plans.iter().collect();
        ok(&s.center(&refs));
    }

    #[test]
    fn local_search_never_worsens() {
        let s = space(15, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = s.random_state(&mut rng);
            assert!(s.fitness(&s.local_search(&p)) <= s.fitness(&p) + 1e-9);
        }
    }

    #[test]
    fn move_toward_reaches_target() {
        let s = space(10, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = s.random_state(&mut rng);
        let b = s.random_state(&mut rng);
        let out = s.move_toward(&a, &b, 1000, &mut rng);
        assert_eq!(s.distance(&out, &b), 0);
        assert_eq!(out.breaks, b.breaks);
    }

    #[test]
    fn fitness_matches_breakdown() {
        let s = space(20, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = s.random_state(&mut rng);
        let b = s.breakdown(&p).unwrap();
        assert!(close(s.fitness(&p), b.total, 1e-9 * b.total));
    }

    #[test]
    fn scenario_round_trip() {
        let json = r#"{
            "name": "tiny",
            "depot": [0, 0],
            "sites": [[1, 0], [2, 0], [3, 0]],
            "k": [1, 2],
            "scale": 2.0,
            "params": {"fuel_price": 0, "parking_fee": 5}
        }"#;
        let sc = Scenario::from_json(json).unwrap();
        let r = sc.resolve().unwrap();
        assert_eq!(r.ks, vec![1, 2]);
        assert_eq!(r.n_sites(), 3);
        assert_eq!(r.matrix.get(3, 0), 2.0);
        assert_eq!(r.params.parking_fee, 5.0);
        assert_eq!(r.params.daily_cost, 250.0);

        let by_index = r#"{"name": "i", "depot": 1, "sites": [[1, 0], [0, 0], [3, 0]], "k": 2}"#;
        let r = Scenario::from_json(by_index).unwrap().resolve().unwrap();
        assert_eq!(r.coords, vec![(1.0, 0.0), (3.0, 0.0), (0.0, 0.0)]);

        let bad = r#"{"name": "b", "depot": [0, 0], "sites": [[1, 0]], "k": 2}"#;
        assert!(Scenario::from_json(bad).unwrap().resolve().is_err());
        assert!(Scenario::from_json("{").is_err());
    }
}
