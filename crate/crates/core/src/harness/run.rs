//! Per-kind experiment runners. Each returns a typed result, which `run`
//! serializes into the report alongside the CSV artifacts.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::{acceptance_suite, Artifact, ExperimentConfig, Kind, RunOutcome, RunReport};
use crate::boweneye::{self, EtaMeasure, SaddleParams, SojournTrace, TakensCondition};
use crate::decompose::{
    attractors_and_basins, build_transition_graph, default_samples, sensitive_dependence_estimate,
    strong_transitivity_check, AttractorReport, TransitionGraph, Transitivity,
};
use crate::ergopt::{block_ends, construct_oscillating_orbit, max_birkhoff_over_periodic, MaximizationResult, PeriodicOrbit};
use crate::growing::{growing_times, horseshoe_search, nue_averages, GrowingTimeRecord, Horseshoe, NueDiagnostics};
use crate::orbitstats::{
    birkhoff_series, empirical_measure, omega_limit_estimate, statistical_omega_limit, statistical_spectrum,
    visiting_frequency, EmpiricalMeasure, OscillationReport, Region, SpectrumEstimate, TestFunctionFamily,
};
use crate::systems::{BitSource, Point, System};
use crate::{Error, GridPartition, Result};

fn region_of(cfg: &ExperimentConfig, system: &System) -> Option<Region> {
    cfg.params.region.map(|r| {
        if system.dimension() == 1 {
            Region::interval(system.space(), r.lo[0], r.hi[0])
        } else {
            Region::Box { space: system.space(), lo: Point(r.lo), hi: Point(r.hi) }
        }
    })
}

fn family_of(cfg: &ExperimentConfig, system: &System) -> Result<TestFunctionFamily> {
    TestFunctionFamily::new(system.dimension(), cfg.params.truncation)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitStatsResult {
    pub system: String,
    pub initial_point: Point,
    pub observable: String,
    pub birkhoff: OscillationReport,
    pub visiting: Option<OscillationReport>,
    pub measure: EmpiricalMeasure,
    /// Cells visited in the last `tail_fraction` of the orbit.
    pub omega: Vec<usize>,
    /// Distance of each checkpoint's empirical measure to the first one.
    #[serde(skip)]
    pub distances: Vec<(u64, f64)>,
}

impl OrbitStatsResult {
    /// `n,average,distance_to_first`.
    pub fn checkpoints_csv(&self) -> String {
        let mut out = String::from("n,average,distance_to_first\n");
        for c in &self.birkhoff.checkpoints {
            let d = self.distances.iter().find(|(n, _)| *n == c.n).map_or(String::new(), |(_, d)| d.to_string());
            let _ = writeln!(out, "{},{},{d}", c.n, c.average);
        }
        out
    }
}

/// Distances to the first checkpoint's measure, along the same schedule.
fn checkpoint_distances(
    system: &System,
    x0: Point,
    cfg: &ExperimentConfig,
    family: &TestFunctionFamily,
) -> Result<Vec<(u64, f64)>> {
    let grid = GridPartition::new(system.space(), cfg.budget.m)?;
    let checkpoints = cfg.schedule.checkpoints(cfg.budget.n);
    let mut counts = vec![0u64; grid.len()];
    let mut first: Option<Vec<f64>> = None;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().peekable();
    let mut seen = 0u64;
    for p in system.iter_orbit(x0)?.take(cfg.budget.n as usize) {
        counts[grid.cell_of(p)] += 1;
        seen += 1;
        if next.peek() == Some(&seen) {
            next.next();
            let mu = EmpiricalMeasure::from_counts(grid, &counts)?;
            let features = family.integrals(&mu);
            let first = first.get_or_insert_with(|| features.clone());
            out.push((seen, family.feature_distance(first, &features)));
        }
    }
    Ok(out)
}

pub fn run_orbit_stats(cfg: &ExperimentConfig) -> Result<OrbitStatsResult> {
    let system = cfg.system()?;
    let x0 = cfg.initial_point()?;
    let phi = &cfg.params.observable;
    let n = cfg.budget.n;
    let birkhoff = birkhoff_series(&system, x0, |p| phi.eval(p), n, &cfg.schedule)?;
    let visiting = region_of(cfg, &system)
        .map(|r| visiting_frequency(&system, x0, &r, n, &cfg.schedule))
        .transpose()?;
    let measure = empirical_measure(&system, x0, n, cfg.budget.m, cfg.budget.burn_in)?;
    let omega = omega_limit_estimate(&system, x0, n, cfg.budget.m, cfg.params.tail_fraction)?;
    let family = family_of(cfg, &system)?;
    let distances = checkpoint_distances(&system, x0, cfg, &family)?;
    Ok(OrbitStatsResult {
        system: system.family().name().into(),
        initial_point: x0,
        observable: phi.to_string(),
        birkhoff,
        visiting,
        measure,
        omega: omega.into_iter().collect(),
        distances,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub system: String,
    pub initial_point: Point,
    pub representatives: usize,
    pub persistent: usize,
    /// Largest distance between two persistent representatives.
    pub max_separation: Option<f64>,
    pub omega_star: Vec<usize>,
    pub omega: Vec<usize>,
    pub omega_star_in_omega: bool,
    pub spectrum: SpectrumEstimate,
}

impl SpectrumResult {
    /// `n,cluster,distance_to_first`.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,cluster,distance_to_first\n");
        for r in &self.spectrum.rows {
            let cluster = r.cluster.map_or(String::new(), |c| c.to_string());
            let _ = writeln!(out, "{},{cluster},{}", r.n, r.distance_to_first);
        }
        out
    }
}

fn spectrum_of(cfg: &ExperimentConfig, system: &System, x0: Point) -> Result<SpectrumResult> {
    let n = cfg.budget.n;
    let m = cfg.budget.m;
    let family = family_of(cfg, system)?;
    let spectrum = statistical_spectrum(system, x0, n, m, &cfg.schedule, cfg.params.cluster_radius, &family)?;
    let omega_star = statistical_omega_limit(&spectrum, cfg.params.mass_floor)?;
    let omega = omega_limit_estimate(system, x0, n, m, cfg.params.tail_fraction)?;
    let persistent: Vec<usize> =
        spectrum.representatives.iter().enumerate().filter(|(_, r)| r.hits >= 2).map(|(i, _)| i).collect();
    let max_separation = persistent
        .iter()
        .flat_map(|&i| persistent.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .map(|(i, j)| spectrum.distances[i][j])
        .reduce(f64::max);
    Ok(SpectrumResult {
        system: system.family().name().into(),
        initial_point: x0,
        representatives: spectrum.representatives.len(),
        persistent: persistent.len(),
        max_separation,
        omega_star_in_omega: omega_star.is_subset(&omega),
        omega_star: omega_star.into_iter().collect(),
        omega: omega.into_iter().collect(),
        spectrum,
    })
}

pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<SpectrumResult> {
    let system = cfg.system()?;
    let x0 = cfg.initial_point()?;
    spectrum_of(cfg, &system, x0)
}

/// The constructed orbit of maximal oscillation and its statistics.
#[derive(Clone, Debug, Serialize)]
pub struct OscillatingOrbit {
    pub targets: Vec<PeriodicOrbit>,
    pub target_averages: Vec<f64>,
    pub program: String,
    pub block_ends: Vec<u64>,
    pub birkhoff: OscillationReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeResult {
    pub observable: String,
    pub maximization: MaximizationResult,
    pub oscillating: Option<OscillatingOrbit>,
}

pub fn run_optimize(cfg: &ExperimentConfig) -> Result<OptimizeResult> {
    let system = cfg.system()?;
    let phi = &cfg.params.observable;
    let maximization = max_birkhoff_over_periodic(&system, |p| phi.eval(p), cfg.budget.period)?;
    let oscillating = if cfg.params.targets.is_empty() {
        None
    } else {
        let targets =
            cfg.params.targets.iter().map(PeriodicOrbit::doubling_from_word).collect::<Result<Vec<_>>>()?;
        let total_bits = cfg.params.total_bits.unwrap_or(cfg.budget.n + 64);
        let program = construct_oscillating_orbit(&targets, cfg.params.growth, total_bits)?;
        let ends = block_ends(&program);
        let symbolic = System::symbolic(BitSource::Program(program.clone()))?;
        let x0 = symbolic.initial_point().ok_or_else(|| Error::contract("symbolic orbit has no points"))?;
        let birkhoff = birkhoff_series(&symbolic, x0, |p| phi.eval(p), cfg.budget.n, &cfg.schedule)?;
        Some(OscillatingOrbit {
            target_averages: targets.iter().map(|t| t.average(|p| phi.eval(p))).collect(),
            targets,
            program: program.to_string(),
            block_ends: ends,
            birkhoff,
        })
    };
    Ok(OptimizeResult { observable: phi.to_string(), maximization, oscillating })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeResult {
    pub system: String,
    pub m: usize,
    pub samples: usize,
    pub padding: usize,
    pub cells: usize,
    pub edges: usize,
    /// Number of attractors.
    pub ell: usize,
    pub attractors: AttractorReport,
    pub transitivity: Transitivity,
    /// `diameter / (2 min delta_grid)`, stated when every attractor is fat.
    pub count_bound: Option<f64>,
    pub count_bound_holds: Option<bool>,
    /// One estimate per attractor.
    pub sensitivity: Vec<f64>,
    #[serde(skip)]
    pub graph: TransitionGraph,
}

pub fn run_decompose(cfg: &ExperimentConfig) -> Result<DecomposeResult> {
    let system = cfg.system()?;
    let samples = cfg.budget.samples.unwrap_or_else(|| default_samples(system.dimension()));
    let graph = build_transition_graph(&system, cfg.budget.m, samples, cfg.budget.padding, cfg.seed)?;
    let report = attractors_and_basins(&graph, cfg.params.fat_block);
    let transitivity = strong_transitivity_check(&graph);
    let count_bound = (report.fat.iter().all(|&f| f) && !report.fat.is_empty()).then(|| {
        let delta = report.delta_grid.iter().copied().fold(f64::INFINITY, f64::min);
        system.space().diameter() / (2.0 * delta)
    });
    let sensitivity = match cfg.params.sensitivity {
        Some(s) => {
            let eps = s.eps.unwrap_or_else(|| graph.grid.width(0));
            report
                .attractors
                .iter()
                .map(|a| sensitive_dependence_estimate(&system, &graph.grid, a, s.n_max, eps))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    Ok(DecomposeResult {
        system: system.family().name().into(),
        m: cfg.budget.m,
        samples,
        padding: cfg.budget.padding,
        cells: graph.len(),
        edges: graph.edge_count(),
        ell: report.count(),
        count_bound_holds: count_bound.map(|b| report.count() as f64 <= b),
        count_bound,
        attractors: report,
        transitivity,
        sensitivity,
        graph,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HorseshoeResult {
    pub p: f64,
    pub eps: f64,
    pub n_max: usize,
    pub horseshoe: Option<Horseshoe>,
    pub entropy_lower_bound: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowingSummary {
    pub delta: f64,
    pub budget: usize,
    pub evaluated: usize,
    pub count: usize,
    pub density: f64,
    pub first_time: Option<usize>,
    pub pre_balls: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowingResult {
    pub system: String,
    pub x: f64,
    pub growing: GrowingSummary,
    pub nue: NueDiagnostics,
    pub horseshoe: Option<HorseshoeResult>,
    #[serde(skip)]
    pub record: GrowingTimeRecord,
}

pub fn run_growing(cfg: &ExperimentConfig) -> Result<GrowingResult> {
    let system = cfg.system()?;
    let x = cfg.initial_point()?.x();
    let record = growing_times(&system, x, cfg.params.delta, cfg.budget.growing as usize)?;
    let nue = nue_averages(&system, x, cfg.budget.n, cfg.params.delta_t, &cfg.schedule)?;
    let horseshoe = cfg
        .params
        .horseshoe
        .map(|h| -> Result<HorseshoeResult> {
            let found = horseshoe_search(&system, h.p, h.eps, h.n_max)?;
            Ok(HorseshoeResult {
                p: h.p,
                eps: h.eps,
                n_max: h.n_max,
                entropy_lower_bound: found.as_ref().map(|s| s.entropy_lower_bound()),
                horseshoe: found,
            })
        })
        .transpose()?;
    Ok(GrowingResult {
        system: system.family().name().into(),
        x,
        growing: GrowingSummary {
            delta: record.delta,
            budget: record.budget,
            evaluated: record.evaluated,
            count: record.times.len(),
            density: record.density(),
            first_time: record.times.first().map(|t| t.n),
            pre_balls: record.times.iter().filter(|t| t.pre_ball.is_some()).count(),
        },
        nue,
        horseshoe,
        record,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoweneyeResult {
    pub params: SaddleParams,
    pub limsup: f64,
    pub liminf: f64,
    pub rho: f64,
    pub eta: EtaMeasure,
    pub takens: TakensCondition,
    pub final_fraction: f64,
    #[serde(skip)]
    pub trace: SojournTrace,
}

pub fn run_boweneye(cfg: &ExperimentConfig) -> Result<BoweneyeResult> {
    let params = cfg.saddle.ok_or_else(|| Error::config("kind 'boweneye' needs a [saddle] section"))?;
    let trace = boweneye::simulate(&params)?;
    let (limsup, liminf) = boweneye::fraction_limit_points(&params)?;
    let takens = boweneye::takens_condition(&params);
    Ok(BoweneyeResult {
        params,
        limsup,
        liminf,
        rho: takens.rho,
        eta: boweneye::eta_measure(&params),
        takens,
        final_fraction: trace.fractions().last().unwrap_or(f64::NAN),
        trace,
    })
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

/// Runs one experiment: validates, dispatches to the owning module and
/// collects the report plus CSV artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let (results, artifacts) = match cfg.kind {
        Kind::OrbitStats => {
            let r = run_orbit_stats(cfg)?;
            (to_value(&r)?, vec![Artifact::new("checkpoints.csv", r.checkpoints_csv())])
        }
        Kind::Spectrum => {
            let r = run_spectrum(cfg)?;
            (to_value(&r)?, vec![Artifact::new("spectrum.csv", r.csv())])
        }
        Kind::Optimize => {
            let r = run_optimize(cfg)?;
            let artifacts = r.oscillating.as_ref().map_or(Vec::new(), |o| {
                let mut csv = String::from("n,average\n");
                for c in &o.birkhoff.checkpoints {
                    let _ = writeln!(csv, "{},{}", c.n, c.average);
                }
                vec![Artifact::new("checkpoints.csv", csv)]
            });
            (to_value(&r)?, artifacts)
        }
        Kind::Decompose => {
            let r = run_decompose(cfg)?;
            let artifacts = vec![
                Artifact::new("edges.csv", r.graph.edge_csv()),
                Artifact::new("raster.csv", r.attractors.raster_csv()),
            ];
            (to_value(&r)?, artifacts)
        }
        Kind::Growing => {
            let r = run_growing(cfg)?;
            (to_value(&r)?, vec![Artifact::new("growing.csv", r.record.csv())])
        }
        Kind::Boweneye => {
            let r = run_boweneye(cfg)?;
            (to_value(&r)?, vec![Artifact::new("trace.csv", r.trace.csv())])
        }
        Kind::Acceptance => return acceptance_suite(),
    };
    let mut report = RunReport::new(cfg, results);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(RunOutcome { report, artifacts })
}
