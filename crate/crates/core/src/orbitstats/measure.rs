use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::grid::GridPartition;
use crate::systems::{Point, System};
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 16;

/// Histogram probability measure on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub grid: GridPartition,
    pub masses: Vec<f64>,
    pub samples: u64,
}

impl EmpiricalMeasure {
    pub fn from_counts(grid: GridPartition, counts: &[u64]) -> Result<Self> {
        if counts.len() != grid.len() {
            return Err(Error::contract("count vector does not match grid"));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::contract("empty histogram"));
        }
        let inv = 1.0 / total as f64;
        Ok(EmpiricalMeasure { grid, masses: counts.iter().map(|&c| c as f64 * inv).collect(), samples: total })
    }

    /// The normalized histogram of a finite point set.
    pub fn from_points(grid: GridPartition, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut counts = vec![0u64; grid.len()];
        for p in points {
            counts[grid.cell_of(p)] += 1;
        }
        EmpiricalMeasure::from_counts(grid, &counts)
    }

    /// All mass in the cell of `p`.
    pub fn dirac(grid: GridPartition, p: Point) -> Self {
        let mut masses = vec![0.0; grid.len()];
        masses[grid.cell_of(p)] = 1.0;
        EmpiricalMeasure { grid, masses, samples: 1 }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn support(&self, floor: f64) -> impl Iterator<Item = usize> + '_ {
        self.masses.iter().enumerate().filter(move |(_, &m)| m >= floor).map(|(i, _)| i)
    }
}

/// Histogram of `f^j(x0)` for `burn_in <= j < n`.
pub fn empirical_measure(system: &System, x0: Point, n: u64, m: usize, burn_in: u64) -> Result<EmpiricalMeasure> {
    if n <= burn_in {
        return Err(Error::contract(format!("budget {n} must exceed burn-in {burn_in}")));
    }
    let grid = GridPartition::new(system.space(), m)?;
    let points = system.iter_orbit(x0)?.take(n as usize).skip(burn_in as usize);
    EmpiricalMeasure::from_points(grid, points)
}

/// The ordered test-function family: rescaled harmonics
/// `(1 + cos 2 pi k x_a) / 2`, `(1 + sin 2 pi k x_a) / 2`, interleaved over
/// axes `a` for each frequency `k = 1, 2, ...`, weighted `2^-n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub dimension: usize,
    pub truncation: usize,
}

impl TestFunctionFamily {
    pub fn new(dimension: usize, truncation: usize) -> Result<Self> {
        if truncation == 0 || !(1..=2).contains(&dimension) {
            return Err(Error::config("test-function family needs M >= 1 and dimension 1 or 2"));
        }
        Ok(TestFunctionFamily { dimension, truncation })
    }

    pub fn default_for(dimension: usize) -> Self {
        TestFunctionFamily { dimension, truncation: DEFAULT_TRUNCATION }
    }

    /// `phi_n(p)` for `n = 1..=M`.
    pub fn eval(&self, n: usize, p: Point) -> f64 {
        debug_assert!(n >= 1);
        let i = n - 1;
        let per_k = 2 * self.dimension;
        let k = (i / per_k + 1) as f64;
        let rem = i % per_k;
        let v = p.0[rem / 2];
        let trig = if rem % 2 == 0 { (TAU * k * v).cos() } else { (TAU * k * v).sin() };
        0.5 * (1.0 + trig)
    }

    pub fn weight(&self, n: usize) -> f64 {
        0.5f64.powi(n as i32)
    }

    /// `(int phi_1 dmu, ..., int phi_M dmu)` by cell-midpoint quadrature.
    pub fn integrals(&self, mu: &EmpiricalMeasure) -> Vec<f64> {
        (1..=self.truncation)
            .map(|n| {
                mu.masses
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m != 0.0)
                    .map(|(c, &m)| m * self.eval(n, mu.grid.center(c)))
                    .sum()
            })
            .collect()
    }

    /// Weighted l1 distance between integral vectors.
    pub fn feature_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).enumerate().map(|(i, (x, y))| self.weight(i + 1) * (x - y).abs()).sum()
    }
}

/// Test-function values at every cell midpoint of a grid, for repeated
/// integration against histograms on the same grid.
pub(crate) struct FeatureTable {
    values: Vec<f64>,
    cells: usize,
    truncation: usize,
}

impl FeatureTable {
    pub fn new(grid: &GridPartition, family: &TestFunctionFamily) -> Self {
        let cells = grid.len();
        let mut values = Vec::with_capacity(cells * family.truncation);
        for n in 1..=family.truncation {
            for c in 0..cells {
                values.push(family.eval(n, grid.center(c)));
            }
        }
        FeatureTable { values, cells, truncation: family.truncation }
    }

    pub fn integrals_of_counts(&self, counts: &[u64], total: u64) -> Vec<f64> {
        let inv = 1.0 / total as f64;
        let nonzero: Vec<(usize, f64)> =
            counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c as f64 * inv)).collect();
        (0..self.truncation)
            .map(|n| {
                let row = &self.values[n * self.cells..(n + 1) * self.cells];
                nonzero.iter().map(|&(i, m)| m * row[i]).sum()
            })
            .collect()
    }
}

/// `sum_{n<=M} 2^-n |int phi_n dmu - int phi_n dnu|`.
pub fn measure_distance(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure, family: &TestFunctionFamily) -> Result<f64> {
    if mu.grid != nu.grid {
        return Err(Error::contract("measures live on different grids"));
    }
    if family.dimension != mu.grid.dimension() {
        return Err(Error::contract("test-function family dimension does not match the grid"));
    }
    Ok(family.feature_distance(&family.integrals(mu), &family.integrals(nu)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{BitSource, Space};

    #[test]
    fn empirical_measure_of_fixed_point() {
        let mu = empirical_measure(&System::doubling(), Point::new(0.0), 1000, 16, 0).unwrap();
        assert_eq!(mu.masses[0], 1.0);
        assert_eq!(mu.total_mass(), 1.0);
    }

    #[test]
    fn empirical_measure_of_period_two() {
        let bits = BitSource::Program("(01)x(1)".parse().unwrap());
        let system = System::symbolic(bits).unwrap();
        let mu = empirical_measure(&system, Point::default(), 1000, 8, 0).unwrap();
        let mut expected = vec![0.0; 8];
        expected[2] = 0.5;
        expected[5] = 0.5;
        assert_eq!(mu.masses, expected);
    }

    #[test]
    fn burn_in_must_be_below_budget() {
        assert!(empirical_measure(&System::doubling(), Point::new(0.1), 10, 8, 10).is_err());
    }

    #[test]
    fn family_order_and_range() {
        let f = TestFunctionFamily::new(2, 8).unwrap();
        let p = Point::xy(0.25, 0.0);
        // cos x, sin x, cos y, sin y at k = 1
        assert!((f.eval(1, p) - 0.5).abs() < 1e-15);
        assert!((f.eval(2, p) - 1.0).abs() < 1e-15);
        assert_eq!(f.eval(3, p), 1.0);
        assert_eq!(f.eval(4, p), 0.5);
        // k = 2 next
        assert!((f.eval(5, p) - 0.0).abs() < 1e-15);
        for n in 1..=8 {
            for i in 0..100 {
                let v = f.eval(n, Point::xy(i as f64 / 100.0, 1.0 - i as f64 / 100.0));
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    /// Term-by-term oracle for the distance between two cell masses.
    fn dirac_distance_oracle(grid: &GridPartition, a: usize, b: usize, m_terms: usize) -> f64 {
        let (ca, cb) = (grid.center(a).x(), grid.center(b).x());
        let mut total = 0.0;
        for n in 1..=m_terms {
            let k = ((n - 1) / 2 + 1) as f64;
            let f = |x: f64| {
                if (n - 1) % 2 == 0 {
                    0.5 * (1.0 + (TAU * k * x).cos())
                } else {
                    0.5 * (1.0 + (TAU * k * x).sin())
                }
            };
            total += 0.5f64.powi(n as i32) * (f(ca) - f(cb)).abs();
        }
        total
    }

    #[test]
    fn dirac_distance_matches_oracle_and_midpoint_limit() {
        let family = TestFunctionFamily::new(1, 4).unwrap();
        for m in [8usize, 64, 1000] {
            let grid = GridPartition::new(Space::Circle, m).unwrap();
            let d0 = EmpiricalMeasure::dirac(grid, Point::new(0.0));
            let dh = EmpiricalMeasure::dirac(grid, Point::new(0.5));
            let d = measure_distance(&d0, &dh, &family).unwrap();
            let oracle = dirac_distance_oracle(&grid, 0, m / 2, 4);
            assert!((d - oracle).abs() < 1e-15);
            // At exact points only the first term contributes: 1/2 * |1 - 0|.
            assert!((d - 0.5).abs() <= TAU / m as f64, "m = {m}: {d}");
        }
    }

    #[test]
    fn grid_mismatch_is_contract_violation() {
        let a = EmpiricalMeasure::dirac(GridPartition::new(Space::Circle, 8).unwrap(), Point::new(0.0));
        let b = EmpiricalMeasure::dirac(GridPartition::new(Space::Circle, 16).unwrap(), Point::new(0.0));
        let fam = TestFunctionFamily::default_for(1);
        assert!(matches!(measure_distance(&a, &b, &fam), Err(Error::Contract(_))));
        assert_eq!(measure_distance(&a, &a, &fam).unwrap(), 0.0);
    }

    #[test]
    fn feature_table_agrees_with_direct_integrals() {
        let grid = GridPartition::new(Space::Torus, 6).unwrap();
        let fam = TestFunctionFamily::default_for(2);
        let counts: Vec<u64> = (0..grid.len() as u64).map(|i| (i * 7) % 5).collect();
        let total = counts.iter().sum();
        let mu = EmpiricalMeasure::from_counts(grid, &counts).unwrap();
        let table = FeatureTable::new(&grid, &fam);
        let a = table.integrals_of_counts(&counts, total);
        let b = fam.integrals(&mu);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
