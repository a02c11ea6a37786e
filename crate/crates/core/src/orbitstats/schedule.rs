use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_RATIO: f64 = 1.05;

/// Geometric checkpoints `n_k = ceil(ratio^k)`, deduplicated, capped at the
/// budget, with the budget itself appended as the final checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub ratio: f64,
    /// First checkpoint counted in the tail; `None` means `ceil(sqrt(N))`.
    #[serde(default)]
    pub tail_start: Option<u64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { ratio: DEFAULT_RATIO, tail_start: None }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(Error::config(format!("schedule ratio {} must exceed 1", self.ratio)));
        }
        Ok(())
    }

    pub fn checkpoints(&self, budget: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut k = 0i32;
        loop {
            let n = self.ratio.powi(k).ceil() as u64;
            if n > budget {
                break;
            }
            if out.last() != Some(&n) {
                out.push(n);
            }
            k += 1;
        }
        if budget > 0 && out.last() != Some(&budget) {
            out.push(budget);
        }
        out
    }

    pub fn tail_start(&self, budget: u64) -> u64 {
        self.tail_start.unwrap_or_else(|| (budget as f64).sqrt().ceil() as u64)
    }

    pub fn tail(&self, budget: u64) -> Vec<u64> {
        let start = self.tail_start(budget);
        self.checkpoints(budget).into_iter().filter(|&n| n >= start).collect()
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_are_geometric_and_end_at_budget() {
        let s = Schedule { ratio: 2.0, tail_start: None };
        assert_eq!(s.checkpoints(20), vec![1, 2, 4, 8, 16, 20]);
        assert_eq!(s.tail_start(20), 5);
        assert_eq!(s.tail(20), vec![8, 16, 20]);
        let d = Schedule::default().checkpoints(1_000_000);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*d.last().unwrap(), 1_000_000);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut c = CompensatedSum::default();
        let mut naive = 0.0;
        for _ in 0..1_000_000 {
            c.add(0.1);
            naive += 0.1;
        }
        assert!((c.value() - 100_000.0).abs() < 1e-9);
        assert!((naive - 100_000.0f64).abs() > (c.value() - 100_000.0).abs());
    }

    #[test]
    fn invalid_ratio() {
        assert!(Schedule { ratio: 1.0, tail_start: None }.validate().is_err());
    }
}
