use serde::{Deserialize, Serialize};

use super::{EmpiricalMeasure, FeatureTable, Schedule, TestFunctionFamily};
use crate::grid::{CellSet, GridPartition};
use crate::systems::{Point, System, Truncation};
use crate::{Error, Result};

pub const DEFAULT_CLUSTER_RADIUS: f64 = 0.05;
pub const MIN_TAIL_CHECKPOINTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representative {
    pub measure: EmpiricalMeasure,
    /// Checkpoint at which this cluster was first seen.
    pub first_n: u64,
    /// Tail checkpoints assigned to this cluster.
    pub hits: usize,
}

/// One row per checkpoint. `cluster` is `None` before the tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u64,
    pub cluster: Option<usize>,
    pub distance_to_first: f64,
}

/// Greedy clustering of the empirical measures at tail checkpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub representatives: Vec<Representative>,
    pub schedule: Schedule,
    pub cluster_radius: f64,
    pub family: TestFunctionFamily,
    pub budget: u64,
    pub tail_start: u64,
    pub rows: Vec<SpectrumRow>,
    /// `distances[i][j]` between representatives `i` and `j`.
    pub distances: Vec<Vec<f64>>,
    pub truncation: Option<Truncation>,
}

impl SpectrumEstimate {
    /// Representatives hit at least twice in the tail: the finite-budget
    /// stand-in for accumulation points.
    pub fn persistent(&self) -> impl Iterator<Item = &Representative> {
        self.representatives.iter().filter(|r| r.hits >= 2)
    }

    pub fn min_separation(&self) -> Option<f64> {
        let k = self.distances.len();
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| self.distances[i][j]).reduce(f64::min)
    }
}

/// Empirical measures at every checkpoint, clustered greedily over the tail:
/// a tail measure joins the first representative strictly closer than
/// `cluster_radius`, and otherwise becomes a new representative.
pub fn statistical_spectrum(
    system: &System,
    x0: Point,
    n: u64,
    m: usize,
    schedule: &Schedule,
    cluster_radius: f64,
    family: &TestFunctionFamily,
) -> Result<SpectrumEstimate> {
    schedule.validate()?;
    if !(cluster_radius > 0.0) {
        return Err(Error::config("cluster radius must be positive"));
    }
    let grid = GridPartition::new(system.space(), m)?;
    if family.dimension != grid.dimension() {
        return Err(Error::contract("test-function family dimension does not match the system"));
    }
    let checkpoints = schedule.checkpoints(n);
    let tail_start = schedule.tail_start(n);
    let tail_len = checkpoints.iter().filter(|&&c| c >= tail_start).count();
    if tail_len < MIN_TAIL_CHECKPOINTS {
        return Err(Error::budget(format!(
            "schedule gives {tail_len} tail checkpoints, at least {MIN_TAIL_CHECKPOINTS} are needed"
        )));
    }

    let table = FeatureTable::new(&grid, family);
    let mut counts = vec![0u64; grid.len()];
    let mut reps: Vec<(Representative, Vec<f64>)> = Vec::new();
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut first: Option<Vec<f64>> = None;
    let mut next = checkpoints.iter().copied().peekable();
    let mut count = 0u64;
    let mut it = system.iter_orbit(x0)?;
    for p in it.by_ref().take(n as usize) {
        counts[grid.cell_of(p)] += 1;
        count += 1;
        if next.peek() != Some(&count) {
            continue;
        }
        next.next();
        let features = table.integrals_of_counts(&counts, count);
        let first = first.get_or_insert_with(|| features.clone());
        let distance_to_first = family.feature_distance(first, &features);
        let cluster = if count >= tail_start {
            let found = reps.iter().position(|(_, f)| family.feature_distance(f, &features) < cluster_radius);
            Some(match found {
                Some(i) => {
                    reps[i].0.hits += 1;
                    i
                }
                None => {
                    let measure = EmpiricalMeasure::from_counts(grid, &counts)?;
                    reps.push((Representative { measure, first_n: count, hits: 1 }, features));
                    reps.len() - 1
                }
            })
        } else {
            None
        };
        rows.push(SpectrumRow { n: count, cluster, distance_to_first });
    }
    let truncation = it.truncation();
    if reps.is_empty() {
        return Err(Error::budget(format!("orbit truncated after {count} points, before the tail")));
    }
    let distances = reps
        .iter()
        .map(|(_, a)| reps.iter().map(|(_, b)| family.feature_distance(a, b)).collect())
        .collect();
    Ok(SpectrumEstimate {
        representatives: reps.into_iter().map(|(r, _)| r).collect(),
        schedule: schedule.clone(),
        cluster_radius,
        family: *family,
        budget: n,
        tail_start,
        rows,
        distances,
        truncation,
    })
}

/// Cells carrying at least `mass_floor` in some representative.
pub fn statistical_omega_limit(spectrum: &SpectrumEstimate, mass_floor: f64) -> Result<CellSet> {
    if !(mass_floor > 0.0) {
        return Err(Error::config("mass floor must be positive"));
    }
    Ok(spectrum.representatives.iter().flat_map(|r| r.measure.support(mass_floor)).collect())
}

/// Cells visited by the last `tail_fraction * N` points of the orbit.
pub fn omega_limit_estimate(system: &System, x0: Point, n: u64, m: usize, tail_fraction: f64) -> Result<CellSet> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::config("tail fraction must lie in (0, 1)"));
    }
    let grid = GridPartition::new(system.space(), m)?;
    let skip = n - (tail_fraction * n as f64).ceil() as u64;
    Ok(system.iter_orbit(x0)?.take(n as usize).skip(skip as usize).map(|p| grid.cell_of(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::BitSource;

    #[test]
    fn period_two_has_one_representative() {
        let system = System::symbolic(BitSource::Program("(01)x(1)".parse().unwrap())).unwrap();
        let fam = TestFunctionFamily::default_for(1);
        let s = statistical_spectrum(&system, Point::default(), 100_000, 8, &Schedule::default(), 0.05, &fam).unwrap();
        assert_eq!(s.representatives.len(), 1);
        let omega_star = statistical_omega_limit(&s, 1e-6).unwrap();
        assert_eq!(omega_star, CellSet::from([2, 5]));
        let omega = omega_limit_estimate(&system, Point::default(), 100_000, 8, 0.5).unwrap();
        assert!(omega_star.is_subset(&omega));
    }

    #[test]
    fn fixed_point_spectrum() {
        let fam = TestFunctionFamily::default_for(1);
        let s = statistical_spectrum(&System::doubling(), Point::new(0.0), 10_000, 16, &Schedule::default(), 0.05, &fam)
            .unwrap();
        assert_eq!(s.representatives.len(), 1);
        assert_eq!(statistical_omega_limit(&s, 1e-6).unwrap(), CellSet::from([0]));
        assert_eq!(omega_limit_estimate(&System::doubling(), Point::new(0.0), 1000, 16, 0.5).unwrap().len(), 1);
    }

    #[test]
    fn short_budget_is_rejected() {
        let fam = TestFunctionFamily::default_for(1);
        let r = statistical_spectrum(&System::doubling(), Point::new(0.0), 10, 16, &Schedule::default(), 0.05, &fam);
        assert!(matches!(r, Err(Error::Budget(_))));
    }

    #[test]
    fn random_doubling_orbit_covers_circle() {
        let system = System::symbolic(BitSource::Random { seed: 7, precision: 53 }).unwrap();
        let omega = omega_limit_estimate(&system, Point::default(), 100_000, 64, 0.5).unwrap();
        assert_eq!(omega.len(), 64);
        let fam = TestFunctionFamily::default_for(1);
        let s = statistical_spectrum(&system, Point::default(), 1_000_000, 64, &Schedule::default(), 0.05, &fam)
            .unwrap();
        assert_eq!(statistical_omega_limit(&s, 1e-6).unwrap().len(), 64);
    }

    #[test]
    fn clustering_invariants() {
        let system = System::logistic(1.0).unwrap();
        let fam = TestFunctionFamily::default_for(1);
        let s = statistical_spectrum(&system, Point::new(0.2345), 200_000, 32, &Schedule::default(), 0.02, &fam)
            .unwrap();
        for i in 0..s.distances.len() {
            for j in 0..s.distances.len() {
                if i != j {
                    assert!(s.distances[i][j] >= 0.02);
                }
            }
        }
        assert!(s.rows.iter().filter(|r| r.n >= s.tail_start).all(|r| r.cluster.is_some()));
    }
}
