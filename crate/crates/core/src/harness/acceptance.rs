//! The acceptance suite: nine criteria, each a fixed experiment with pinned
//! tolerances and a wall-clock limit.

use std::collections::VecDeque;
use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use super::run::{self, DecomposeResult, SpectrumResult};
use super::{Artifact, ExperimentConfig, Kind, RunOutcome, RunReport, Verdict};
use crate::decompose::{condensation, strongly_connected_components, TransitionGraph};
use crate::ergopt::enumerate_periodic_orbits;
use crate::orbitstats::{measure_distance, EmpiricalMeasure, TestFunctionFamily, DEFAULT_TRUNCATION};
use crate::seed::{self, Domain};
use crate::systems::{BitSource, BlockProgram, Family, Space, System};
use crate::{Error, GridPartition, Result};

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../fixtures/acceptance/", $name, ".toml")))
    };
}

/// Every fixture the suite loads, by name.
pub const FIXTURES: [(&str, &str); 12] = [
    fixture!("oscillation"),
    fixture!("mp_orbit"),
    fixture!("doubling_graph"),
    fixture!("contraction_graph"),
    fixture!("logistic_graph"),
    fixture!("skew_tent_graph"),
    fixture!("bowen_eye"),
    fixture!("bowen_eye_control"),
    fixture!("nue_doubling"),
    fixture!("nue_manneville_pomeau"),
    fixture!("nue_logistic"),
    fixture!("growing_doubling"),
];

pub fn fixture(name: &str) -> Result<ExperimentConfig> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::config(format!("no acceptance fixture named '{name}'")))?;
    ExperimentConfig::parse(text)
}

/// Seeded initial points used where a criterion quantifies over seeds.
pub const SEEDED_POINTS: u64 = 5;

struct Record {
    label: String,
    config: ExperimentConfig,
    digest: String,
}

/// State shared between criteria: every config that ran, with its report
/// digest, and every orbit and graph the property suite inspects.
#[derive(Default)]
pub struct Suite {
    records: Vec<Record>,
    containment: Vec<(String, bool)>,
    graphs: Vec<(String, TransitionGraph)>,
    program: Option<BlockProgram>,
}

impl Suite {
    fn record<T: Serialize>(&mut self, label: impl Into<String>, cfg: &ExperimentConfig, result: &T) -> Result<()> {
        let digest = RunReport::new(cfg, serde_json::to_value(result)?).digest()?;
        self.records.push(Record { label: label.into(), config: cfg.clone(), digest });
        Ok(())
    }

    fn spectrum(&mut self, label: &str, cfg: &ExperimentConfig) -> Result<SpectrumResult> {
        let r = run::run_spectrum(cfg)?;
        self.record(label, cfg, &r)?;
        self.containment.push((label.to_string(), r.omega_star_in_omega));
        Ok(r)
    }

    fn decompose(&mut self, label: &str, cfg: &ExperimentConfig) -> Result<DecomposeResult> {
        let r = run::run_decompose(cfg)?;
        self.record(label, cfg, &r)?;
        self.graphs.push((label.to_string(), r.graph.clone()));
        Ok(r)
    }
}

type Check = fn(&mut Suite) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit_seconds: f64,
    check: Check,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, limit_seconds, check: Check| Criterion { id, name, limit_seconds, check };
    vec![
        c(1, "periodic maximum and maximal oscillation", 10.0, oscillation),
        c(2, "statistical spectrum of the constructed orbit", 30.0, spectrum),
        c(3, "Manneville-Pomeau omega and visiting frequency", 60.0, manneville_pomeau),
        c(4, "attractor decomposition", 30.0, decomposition),
        c(5, "skew-product attractor", 120.0, skew_product),
        c(6, "Bowen eye", 1.0, bowen_eye),
        c(7, "expansion and slow recurrence", 60.0, nue),
        c(8, "growing times and horseshoe", 5.0, growing),
        c(9, "property suites", 300.0, properties),
    ]
}

/// Runs the selected criteria in order (all when `ids` is empty).
pub fn run_criteria(ids: &[u32]) -> Vec<Verdict> {
    let mut suite = Suite::default();
    let mut out = Vec::new();
    for c in criteria() {
        if !ids.is_empty() && !ids.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.check)(&mut suite);
        let elapsed = start.elapsed().as_secs_f64();
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        let in_time = elapsed <= c.limit_seconds;
        let detail = if in_time { detail } else { format!("{detail}; over the time limit") };
        out.push(Verdict {
            id: c.id,
            name: c.name.into(),
            passed: ok && in_time,
            detail,
            elapsed_seconds: elapsed,
            limit_seconds: Some(c.limit_seconds),
        });
    }
    out
}

#[derive(Serialize)]
struct VerdictSummary<'a> {
    id: u32,
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

/// Runs every criterion; the report's verdicts carry the outcome.
pub fn acceptance_suite() -> Result<RunOutcome> {
    let start = Instant::now();
    let verdicts = run_criteria(&[]);
    let summary: Vec<VerdictSummary> = verdicts
        .iter()
        .map(|v| VerdictSummary { id: v.id, name: &v.name, passed: v.passed, detail: &v.detail })
        .collect();
    let mut report = RunReport::new(&ExperimentConfig::new(Kind::Acceptance), serde_json::to_value(&summary)?);
    let mut lines = String::new();
    for v in &verdicts {
        let _ = writeln!(lines, "{}", v.line());
    }
    report.verdicts = verdicts;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(RunOutcome { report, artifacts: vec![Artifact::new("acceptance.txt", lines)] })
}

fn oscillation(suite: &mut Suite) -> Result<(bool, String)> {
    let cfg = fixture("oscillation")?;
    let r = run::run_optimize(&cfg)?;
    suite.record("oscillation", &cfg, &r)?;
    let max = &r.maximization;
    let at_zero = max.witness.period == 1 && max.witness.points[0].0[0] == Ratio::from_integer(0);
    let max_ok = max.value == 1.0 && at_zero;
    let osc = r.oscillating.ok_or_else(|| Error::contract("no oscillating orbit was constructed"))?;
    suite.program = Some(osc.program.parse()?);
    let (hi, lo) = (osc.birkhoff.limsup, osc.birkhoff.liminf);
    let ok = max_ok && hi >= 0.98 && lo <= 0.27;
    Ok((
        ok,
        format!(
            "max over P<={} = {} (period {}); constructed orbit limsup {hi:.4} (>= 0.98), liminf {lo:.4} (<= 0.27)",
            max.max_period, max.value, max.witness.period
        ),
    ))
}

/// The spectrum config for the constructed orbit: the oscillation fixture
/// with the symbolic program as its system.
fn constructed_spectrum_config(suite: &mut Suite) -> Result<ExperimentConfig> {
    if suite.program.is_none() {
        let cfg = fixture("oscillation")?;
        let r = run::run_optimize(&cfg)?;
        let osc = r.oscillating.ok_or_else(|| Error::contract("no oscillating orbit was constructed"))?;
        suite.program = Some(osc.program.parse()?);
    }
    let mut cfg = fixture("oscillation")?;
    cfg.kind = Kind::Spectrum;
    cfg.name = Some("constructed-spectrum".into());
    cfg.system = Some(Family::SymbolicDoubling { bits: BitSource::Program(suite.program.clone().expect("set above")) });
    cfg.params.targets.clear();
    cfg.validate()?;
    Ok(cfg)
}

fn spectrum(suite: &mut Suite) -> Result<(bool, String)> {
    let cfg = constructed_spectrum_config(suite)?;
    let r = suite.spectrum("constructed-spectrum", &cfg)?;
    let sep = r.max_separation.unwrap_or(0.0);
    let ok = r.persistent >= 2 && sep >= 0.2;
    Ok((
        ok,
        format!(
            "{} representatives, {} hit at least twice; largest separation {sep:.4} (>= 0.2) at radius {}, M = {}",
            r.representatives, r.persistent, cfg.params.cluster_radius, cfg.params.truncation
        ),
    ))
}

fn manneville_pomeau(suite: &mut Suite) -> Result<(bool, String)> {
    let base = fixture("mp_orbit")?;
    let mut ok = true;
    let mut parts = Vec::new();
    for i in 0..SEEDED_POINTS {
        let mut cfg = base.clone();
        cfg.initial.index = i;
        let r = run::run_orbit_stats(&cfg)?;
        suite.record(format!("mp-orbit-{i}"), &cfg, &r)?;
        let visit = r.visiting.as_ref().map_or(f64::NAN, |v| v.limsup);
        let covered = r.omega.len() == cfg.budget.m;
        ok &= covered && visit >= 0.9;
        parts.push(format!("x={:.4}: {}/{} cells, upper visit {visit:.3}", r.initial_point.x(), r.omega.len(), cfg.budget.m));
    }
    Ok((ok, format!("{} (need all cells and >= 0.9)", parts.join("; "))))
}

/// `x` with `f(x) = x` for `f = g∘g`, by bisection on a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (f(mid) > 0.0) == (fa > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn decomposition(suite: &mut Suite) -> Result<(bool, String)> {
    let mut details = Vec::new();

    let cfg = fixture("doubling_graph")?;
    let d = suite.decompose("doubling-graph", &cfg)?;
    let all = d.attractors.attractors.first().map_or(0, |a| a.len()) == d.cells;
    let doubling_ok = d.ell == 1 && all && d.transitivity.strongly_transitive;
    details.push(format!(
        "doubling: l={}, attractor {}/{} cells, strongly transitive {}",
        d.ell,
        d.attractors.attractors.first().map_or(0, |a| a.len()),
        d.cells,
        d.transitivity.strongly_transitive
    ));

    let cfg = fixture("contraction_graph")?;
    let c = suite.decompose("contraction-graph", &cfg)?;
    let reach = 1 + cfg.budget.padding;
    let grid = c.graph.grid;
    let near_zero = c.attractors.attractors.iter().flatten().all(|&cell| grid.cell_distance(cell, 0) <= reach);
    let whole_basin = c.attractors.basins.first().map_or(0, |b| b.len()) == c.cells;
    let contraction_ok = c.ell == 1 && near_zero && whole_basin;
    details.push(format!(
        "contraction: l={}, attractor {:?} (within {reach} of 0: {near_zero}), basin {}/{}",
        c.ell,
        c.attractors.attractors.first().cloned().unwrap_or_default(),
        c.attractors.basins.first().map_or(0, |b| b.len()),
        c.cells
    ));

    let cfg = fixture("logistic_graph")?;
    let t = match cfg.system {
        Some(Family::Logistic { t }) => t,
        _ => return Err(Error::contract("logistic fixture expected")),
    };
    let g = |x: f64| 4.0 * t * x * (1.0 - x);
    let cycle = [bisect(|x| g(g(x)) - x, 0.45, 0.6), bisect(|x| g(g(x)) - x, 0.75, 0.85)];
    let l = suite.decompose("logistic-graph", &cfg)?;
    let grid = l.graph.grid;
    let targets: Vec<usize> = cycle.iter().map(|&x| grid.cell_of(crate::Point::new(x))).collect();
    let spread = |r: &DecomposeResult| {
        r.attractors
            .attractors
            .iter()
            .flatten()
            .map(|&cell| targets.iter().map(|&t| grid.cell_distance(cell, t)).min().unwrap_or(usize::MAX))
            .max()
            .unwrap_or(usize::MAX)
    };
    let far = spread(&l);
    let logistic_ok = l.ell == 1 && far <= 2;
    let mut padded = cfg.clone();
    padded.budget.padding = 1;
    let lp = suite.decompose("logistic-graph-padded", &padded)?;
    details.push(format!(
        "logistic t={t}: 2-cycle {:.7}, {:.7}; padding {}: l={}, farthest attractor cell {far} from the cycle (<= 2); padding 1: l={}, farthest {}",
        cycle[0],
        cycle[1],
        cfg.budget.padding,
        l.ell,
        lp.ell,
        spread(&lp)
    ));
    Ok((doubling_ok && contraction_ok && logistic_ok, details.join("; ")))
}

fn skew_product(suite: &mut Suite) -> Result<(bool, String)> {
    let cfg = fixture("skew_tent_graph")?;
    let r = suite.decompose("skew-tent-graph", &cfg)?;
    let grid = r.graph.grid;
    let base: std::collections::BTreeSet<usize> =
        r.attractors.attractors.iter().flatten().map(|&c| grid.coords(c)[0]).collect();
    let ok = r.ell == 1 && base.len() == grid.resolution[0];
    Ok((
        ok,
        format!(
            "{} terminal component(s), {} cells, base projection {}/{}",
            r.ell,
            r.attractors.attractors.iter().map(Vec::len).sum::<usize>(),
            base.len(),
            grid.resolution[0]
        ),
    ))
}

fn bowen_eye(suite: &mut Suite) -> Result<(bool, String)> {
    let cfg = fixture("bowen_eye")?;
    let r = run::run_boweneye(&cfg)?;
    suite.record("bowen-eye", &cfg, &r)?;
    let limits_ok = (r.limsup - 2.0 / 3.0).abs() <= 1e-3 && (r.liminf - 1.0 / 3.0).abs() <= 1e-3;
    let eta_ok = r.eta.c_a == 2.0 / 3.0 && r.eta.c_b == 2.0 / 3.0;
    let rho_ok = r.takens.rho == 4.0;
    let mass_ok = r.takens.eta_sum_in_range == Some(true) && (r.eta.mass - 4.0 / 3.0).abs() <= 1e-15;

    let control = fixture("bowen_eye_control")?;
    let c = run::run_boweneye(&control)?;
    suite.record("bowen-eye-control", &control, &c)?;
    let gap = c.limsup - c.liminf;
    let control_ok = c.rho < 1.0 && gap < 1e-3;
    Ok((
        limits_ok && eta_ok && rho_ok && mass_ok && control_ok,
        format!(
            "limit points ({:.6}, {:.6}); eta ({}, {}), mass {}; rho {}; control rho {} gap {gap:.2e}",
            r.limsup, r.liminf, r.eta.c_a, r.eta.c_b, r.eta.mass, r.rho, c.rho
        ),
    ))
}

fn nue(suite: &mut Suite) -> Result<(bool, String)> {
    let mut run_one = |name: &str| -> Result<run::GrowingResult> {
        let cfg = fixture(name)?;
        let r = run::run_growing(&cfg)?;
        suite.record(name, &cfg, &r)?;
        Ok(r)
    };
    let d = run_one("nue_doubling")?;
    let mp = run_one("nue_manneville_pomeau")?;
    let lg = run_one("nue_logistic")?;
    let d_ok = (d.nue.expansion - LN_2).abs() <= 1e-12 && d.nue.slow_recurrence == 0.0;
    let mp_ok = mp.nue.expansion <= 0.05;
    let lg_ok = (lg.nue.expansion - LN_2).abs() <= 0.05;
    Ok((
        d_ok && mp_ok && lg_ok,
        format!(
            "doubling expansion - log 2 = {:.1e}, slow recurrence {}; MP expansion {:.4} (<= 0.05, x={:.4}); logistic expansion {:.6} (log 2 +- 0.05), slow recurrence {:.4}",
            d.nue.expansion - LN_2,
            d.nue.slow_recurrence,
            mp.nue.expansion,
            mp.x,
            lg.nue.expansion,
            lg.nue.slow_recurrence
        ),
    ))
}

fn growing(suite: &mut Suite) -> Result<(bool, String)> {
    let base = fixture("growing_doubling")?;
    let mut densities = Vec::new();
    let mut horseshoe = None;
    for i in 0..SEEDED_POINTS {
        let mut cfg = base.clone();
        cfg.initial.index = i;
        let r = run::run_growing(&cfg)?;
        suite.record(format!("growing-doubling-{i}"), &cfg, &r)?;
        densities.push(r.growing.density);
        horseshoe = r.horseshoe;
    }
    let density_ok = densities.iter().all(|&d| d == 1.0);
    let h = horseshoe.ok_or_else(|| Error::contract("horseshoe search was not configured"))?;
    let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12;
    let (found_ok, found) = match &h.horseshoe {
        Some(s) => (
            close(s.u0, [0.325, 0.425]) && close(s.u1, [0.575, 0.675]) && s.n0 == 2 && s.n1 == 2,
            format!("U0 = ({}, {}) n0={}, U1 = ({}, {}) n1={}", s.u0[0], s.u0[1], s.n0, s.u1[0], s.u1[1], s.n1),
        ),
        None => (false, "no horseshoe found".into()),
    };
    let entropy = h.entropy_lower_bound.unwrap_or(f64::NAN);
    let entropy_ok = (entropy - LN_2 / 2.0).abs() <= 1e-15;
    Ok((
        density_ok && found_ok && entropy_ok,
        format!("densities {densities:?}; {found}; entropy bound {entropy:.6} (log 2 / 2)"),
    ))
}

/// Random histograms on a fixed grid, for the metric axioms.
fn random_histogram(grid: GridPartition, rng: &mut impl Rng) -> Result<EmpiricalMeasure> {
    let mut counts = vec![0u64; grid.len()];
    let support = rng.gen_range(1..=grid.len());
    for _ in 0..support {
        counts[rng.gen_range(0..grid.len())] += rng.gen_range(1..100);
    }
    EmpiricalMeasure::from_counts(grid, &counts)
}

fn metric_axioms(pairs: u64) -> Result<(bool, String)> {
    let mut failures = 0;
    for (space, m) in [(Space::Circle, 64), (Space::Torus, 16)] {
        let grid = GridPartition::new(space, m)?;
        let family = TestFunctionFamily::new(space.dimension(), DEFAULT_TRUNCATION)?;
        for i in 0..pairs / 2 {
            let mut rng = seed::stream(space.dimension() as u64, Domain::PropertySample, i);
            let (a, b, c) =
                (random_histogram(grid, &mut rng)?, random_histogram(grid, &mut rng)?, random_histogram(grid, &mut rng)?);
            let ab = measure_distance(&a, &b, &family)?;
            let ba = measure_distance(&b, &a, &family)?;
            let ac = measure_distance(&a, &c, &family)?;
            let bc = measure_distance(&b, &c, &family)?;
            let aa = measure_distance(&a, &a, &family)?;
            let distinct = a.masses != b.masses;
            let ok = aa == 0.0 && ab >= 0.0 && ab == ba && ac <= ab + bc + 1e-12 && (!distinct || ab > 0.0);
            failures += !ok as usize;
        }
    }
    Ok((failures == 0, format!("metric axioms {failures} failures in {pairs} pairs")))
}

/// Kahn's algorithm on the condensation; also checks that terminal
/// components have no outgoing edges.
fn condensation_acyclic(graph: &TransitionGraph) -> bool {
    let comps = strongly_connected_components(&graph.edges);
    let dag = condensation(graph, &comps);
    let mut indegree = vec![0usize; dag.len()];
    for succ in &dag {
        for &s in succ {
            indegree[s] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..dag.len()).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &s in &dag[v] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                queue.push_back(s);
            }
        }
    }
    let no_self_loops = dag.iter().enumerate().all(|(v, succ)| !succ.contains(&v));
    seen == dag.len() && no_self_loops
}

/// Every edge at padding 0 is an edge at padding 1.
fn padding_monotone(system: &System, m: usize, seed: u64) -> Result<bool> {
    let samples = crate::decompose::default_samples(system.dimension());
    let thin = crate::decompose::build_transition_graph(system, m, samples, 0, seed)?;
    let fat = crate::decompose::build_transition_graph(system, m, samples, 1, seed)?;
    Ok((0..thin.len()).all(|v| thin.edges[v].iter().all(|&w| fat.has_edge(v, w))))
}

/// Exact `f^p(x) = x` with no earlier return, recomputed with rationals.
fn periodic_exactness() -> Result<(bool, usize)> {
    type Q = Ratio<i128>;
    let frac = |q: Q| q - q.floor();
    let mut checked = 0;
    let mut ok = true;
    let cases: [(System, u32); 2] = [(System::doubling(), 12), (System::cat_map(), 6)];
    for (system, max_period) in cases {
        let step: Box<dyn Fn([Q; 2]) -> [Q; 2]> = match *system.family() {
            Family::CatMap { matrix } => Box::new(move |[x, y]: [Q; 2]| {
                let [[a, b], [c, d]] = matrix.map(|row| row.map(|v| Q::from_integer(v as i128)));
                [frac(a * x + b * y), frac(c * x + d * y)]
            }),
            _ => Box::new(move |[x, y]: [Q; 2]| [frac(x * 2), y]),
        };
        for orbit in enumerate_periodic_orbits(&system, max_period)? {
            let p = orbit.period as usize;
            let start = orbit.points[0].0;
            let mut x = start;
            for j in 1..=p {
                x = step(x);
                let back = x == start;
                ok &= if j < p { !back } else { back };
                if j < p {
                    ok &= orbit.points[j].0 == x;
                }
            }
            checked += 1;
        }
    }
    Ok((ok, checked))
}

fn properties(suite: &mut Suite) -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut ok = true;

    let (metric_ok, metric) = metric_axioms(1000)?;
    ok &= metric_ok;
    details.push(metric);

    // Spectra for every orbit computed by the orbit-statistics criteria.
    if !suite.containment.iter().any(|(l, _)| l == "constructed-spectrum") {
        let cfg = constructed_spectrum_config(suite)?;
        suite.spectrum("constructed-spectrum", &cfg)?;
    }
    let orbit_configs: Vec<(String, ExperimentConfig)> = suite
        .records
        .iter()
        .filter(|r| r.config.kind == Kind::OrbitStats)
        .map(|r| (r.label.clone(), r.config.clone()))
        .collect();
    for (label, mut cfg) in orbit_configs {
        cfg.kind = Kind::Spectrum;
        suite.spectrum(&format!("{label}-spectrum"), &cfg)?;
    }
    let violations: Vec<&str> = suite.containment.iter().filter(|(_, c)| !c).map(|(l, _)| l.as_str()).collect();
    ok &= violations.is_empty();
    details.push(format!(
        "omega* in omega on {}/{} orbits{}",
        suite.containment.len() - violations.len(),
        suite.containment.len(),
        if violations.is_empty() { String::new() } else { format!(" (fails: {})", violations.join(", ")) }
    ));

    if suite.graphs.is_empty() {
        for name in ["doubling_graph", "contraction_graph"] {
            suite.decompose(name, &fixture(name)?)?;
        }
    }
    let acyclic = suite.graphs.iter().filter(|(_, g)| condensation_acyclic(g)).count();
    ok &= acyclic == suite.graphs.len();
    details.push(format!("acyclic condensation {acyclic}/{}", suite.graphs.len()));

    let mut monotone = 0;
    let systems = [(System::doubling(), 64), (System::contraction(0.5)?, 64), (System::logistic(0.8)?, 1024)];
    for (system, m) in &systems {
        monotone += padding_monotone(system, *m, 0)? as usize;
    }
    ok &= monotone == systems.len();
    details.push(format!("padding monotone {monotone}/{}", systems.len()));

    let (exact, checked) = periodic_exactness()?;
    ok &= exact;
    details.push(format!("exact periodic orbits {} ({checked} checked)", if exact { "ok" } else { "FAILED" }));

    let mut mismatched = Vec::new();
    for r in &suite.records {
        if super::run(&r.config)?.report.digest()? != r.digest {
            mismatched.push(r.label.clone());
        }
    }
    ok &= mismatched.is_empty();
    details.push(format!(
        "determinism {}/{} configs reproduce{}",
        suite.records.len() - mismatched.len(),
        suite.records.len(),
        if mismatched.is_empty() { String::new() } else { format!(" (differ: {})", mismatched.join(", ")) }
    ));
    Ok((ok, details.join("; ")))
}
