use serde::{Deserialize, Serialize};

use super::{CompensatedSum, Schedule};
use crate::grid::{CellSet, GridPartition};
use crate::systems::{Point, Space, System, Truncation};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub average: f64,
}

/// Finite-budget view of `limsup` / `liminf` of the averages
/// `A_n = (1/n) sum_{j<n} phi(f^j x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub limsup: f64,
    pub liminf: f64,
    pub gap: f64,
    /// Requested budget.
    pub budget: u64,
    /// Orbit points actually averaged (smaller than `budget` on truncation).
    pub evaluated: u64,
    pub tail_start: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub truncation: Option<Truncation>,
}

impl OscillationReport {
    pub fn tail(&self) -> impl Iterator<Item = &Checkpoint> {
        let start = self.tail_start;
        self.checkpoints.iter().filter(move |c| c.n >= start)
    }

    pub fn final_average(&self) -> f64 {
        self.checkpoints.last().map_or(f64::NAN, |c| c.average)
    }
}

/// Running averages of `phi` along the orbit of `x0`, sampled on the
/// schedule's checkpoints. A truncated orbit yields a partial report with
/// the truncation recorded; the last available index becomes a checkpoint.
pub fn birkhoff_series(
    system: &System,
    x0: Point,
    phi: impl Fn(Point) -> f64,
    n: u64,
    schedule: &Schedule,
) -> Result<OscillationReport> {
    if n < 2 {
        return Err(Error::budget("Birkhoff series needs N >= 2"));
    }
    schedule.validate()?;
    let checkpoints = schedule.checkpoints(n);
    let mut it = system.iter_orbit(x0)?;
    let mut sum = CompensatedSum::default();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().peekable();
    let mut count = 0u64;
    for p in it.by_ref().take(n as usize) {
        sum.add(phi(p));
        count += 1;
        if next.peek() == Some(&count) {
            next.next();
            out.push(Checkpoint { n: count, average: sum.value() / count as f64 });
        }
    }
    let truncation = it.truncation();
    if count < n && count > 0 && out.last().map(|c| c.n) != Some(count) {
        out.push(Checkpoint { n: count, average: sum.value() / count as f64 });
    }
    report_from(out, n, count, schedule.tail_start(n), truncation)
}

fn report_from(
    checkpoints: Vec<Checkpoint>,
    budget: u64,
    evaluated: u64,
    tail_start: u64,
    truncation: Option<Truncation>,
) -> Result<OscillationReport> {
    // A truncated orbit may end before the nominal tail: fall back to the
    // last checkpoint alone.
    let tail_start = if checkpoints.iter().any(|c| c.n >= tail_start) {
        tail_start
    } else {
        checkpoints.last().ok_or_else(|| Error::budget("orbit produced no points"))?.n
    };
    let (limsup, liminf) = checkpoints
        .iter()
        .filter(|c| c.n >= tail_start)
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), c| (hi.max(c.average), lo.min(c.average)));
    Ok(OscillationReport {
        limsup,
        liminf,
        gap: limsup - liminf,
        budget,
        evaluated,
        tail_start,
        checkpoints,
        truncation,
    })
}

/// A target set for visiting frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Cells { grid: GridPartition, cells: CellSet },
    /// Half-open box `[lo, hi)` per axis. On a periodic axis `lo > hi`
    /// denotes the arc that wraps through 0, so `(-0.02, 0.02) mod 1` is
    /// `lo = 0.98, hi = 0.02`.
    Box { space: Space, lo: Point, hi: Point },
}

impl Region {
    /// The arc or interval `[a, b)` on a one-dimensional space, with `a`
    /// taken mod 1 on the circle.
    pub fn interval(space: Space, a: f64, b: f64) -> Self {
        let (lo, hi) = if space.periodic()[0] { (crate::systems::wrap_unit(a), crate::systems::wrap_unit(b)) } else { (a, b) };
        Region::Box { space, lo: Point::new(lo), hi: Point::new(hi) }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Cells { grid, cells } => cells.contains(&grid.cell_of(p)),
            Region::Box { space, lo, hi } => {
                let periodic = space.periodic();
                (0..space.dimension()).all(|a| {
                    let (l, h, v) = (lo.0[a], hi.0[a], p.0[a]);
                    if periodic[a] && l > h {
                        v >= l || v < h
                    } else {
                        v >= l && v < h
                    }
                })
            }
        }
    }
}

/// Visit frequencies of `region` along the orbit of `x0`, as an
/// oscillation report of its indicator. The upper visiting frequency
/// estimate is the report's `limsup`.
pub fn visiting_frequency(
    system: &System,
    x0: Point,
    region: &Region,
    n: u64,
    schedule: &Schedule,
) -> Result<OscillationReport> {
    if n < 2 {
        return Err(Error::budget("visiting frequency needs N >= 2"));
    }
    schedule.validate()?;
    let checkpoints = schedule.checkpoints(n);
    let mut it = system.iter_orbit(x0)?;
    let mut hits = 0u64;
    let mut count = 0u64;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().peekable();
    for p in it.by_ref().take(n as usize) {
        hits += region.contains(p) as u64;
        count += 1;
        if next.peek() == Some(&count) {
            next.next();
            out.push(Checkpoint { n: count, average: hits as f64 / count as f64 });
        }
    }
    if count < n && count > 0 && out.last().map(|c| c.n) != Some(count) {
        out.push(Checkpoint { n: count, average: hits as f64 / count as f64 });
    }
    report_from(out, n, count, schedule.tail_start(n), it.truncation())
}
