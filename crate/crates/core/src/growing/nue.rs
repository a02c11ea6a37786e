use serde::Serialize;

use crate::orbitstats::{CompensatedSum, Schedule};
use crate::systems::{Point, System, Truncation};
use crate::{Error, Result};

/// `dist(y, C)` when it is at most `delta_t`, else 1.
pub fn truncated_distance(system: &System, y: f64, delta_t: f64) -> Result<f64> {
    let d = system.critical_set()?.iter().map(|c| (y - c).abs()).fold(f64::INFINITY, f64::min);
    Ok(if d <= delta_t { d } else { 1.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NueCheckpoint {
    pub n: u64,
    pub slow_recurrence: f64,
    pub expansion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NueDiagnostics {
    pub delta_t: f64,
    pub budget: u64,
    pub evaluated: u64,
    /// `(1/n) sum -log dist_{delta_t}(f^j x, C)`.
    pub slow_recurrence: f64,
    /// `(1/n) sum log |f'(f^j x)|`.
    pub expansion: f64,
    pub checkpoints: Vec<NueCheckpoint>,
    pub truncation: Option<Truncation>,
}

/// Running slow-recurrence and expansion averages along the orbit of `x`.
pub fn nue_averages(system: &System, x: f64, n: u64, delta_t: f64, schedule: &Schedule) -> Result<NueDiagnostics> {
    if !(delta_t > 0.0 && delta_t < 1.0) {
        return Err(Error::config("truncation delta_t must lie in (0, 1)"));
    }
    if system.dimension() != 1 {
        return Err(Error::unsupported("expansion averages need a one-dimensional family"));
    }
    schedule.validate()?;
    let critical = system.critical_set()?;
    let marks = schedule.checkpoints(n);
    let mut next = marks.iter().copied().peekable();
    let (mut slow, mut expansion) = (CompensatedSum::default(), CompensatedSum::default());
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut count = 0u64;
    let mut it = system.iter_orbit(Point::new(x))?;
    let mut truncation = None;
    for p in it.by_ref().take(n as usize) {
        let y = p.x();
        let d = critical.iter().map(|c| (y - c).abs()).fold(f64::INFINITY, f64::min);
        match system.derivative_log_norm(p) {
            Ok(l) => expansion.add(l),
            Err(Error::Singularity { .. }) => {
                truncation = Some(Truncation::CriticalCollision { index: count as usize, x: y });
                break;
            }
            Err(e) => return Err(e),
        }
        slow.add(if d <= delta_t { -d.ln() } else { 0.0 });
        count += 1;
        if next.peek() == Some(&count) {
            next.next();
            checkpoints.push(NueCheckpoint {
                n: count,
                slow_recurrence: slow.value() / count as f64,
                expansion: expansion.value() / count as f64,
            });
        }
    }
    let truncation = truncation.or(it.truncation());
    if count == 0 {
        return Err(Error::budget("the orbit produced no regular points"));
    }
    Ok(NueDiagnostics {
        delta_t,
        budget: n,
        evaluated: count,
        slow_recurrence: slow.value() / count as f64,
        expansion: expansion.value() / count as f64,
        checkpoints,
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::LN_2;

    use super::*;

    #[test]
    fn doubling_is_uniformly_expanding() {
        let d = nue_averages(&System::doubling(), 0.2, 10_000, 0.01, &Schedule::default()).unwrap();
        assert_eq!(d.slow_recurrence, 0.0);
        assert!((d.expansion - LN_2).abs() < 1e-12);
        assert!(d.checkpoints.iter().all(|c| c.slow_recurrence == 0.0));
    }

    #[test]
    fn truncated_distance_cases() {
        let sys = System::logistic(1.0).unwrap();
        assert_eq!(truncated_distance(&sys, 0.2, 0.1).unwrap(), 1.0);
        assert!((truncated_distance(&sys, 0.45, 0.1).unwrap() - 0.05).abs() < 1e-15);
        assert_eq!(truncated_distance(&System::doubling(), 0.45, 0.1).unwrap(), 1.0);
    }

    #[test]
    fn slow_recurrence_summands_are_nonnegative() {
        let sys = System::logistic(1.0).unwrap();
        let d = nue_averages(&sys, 0.1234, 100_000, 1e-3, &Schedule::default()).unwrap();
        assert!(d.checkpoints.windows(2).all(|w| w[1].slow_recurrence * w[1].n as f64 >= w[0].slow_recurrence * w[0].n as f64 - 1e-9));
    }
}
