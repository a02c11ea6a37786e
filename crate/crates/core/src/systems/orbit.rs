use serde::{Deserialize, Serialize};

use super::{BitStream, Family, Point, System};
use crate::{Error, Result};

/// Why an orbit stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Truncation {
    /// The iterate at `index` hit the critical set at machine precision.
    CriticalCollision { index: usize, x: f64 },
    NonFinite { index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    pub truncation: Option<Truncation>,
}

enum State {
    Map(Point),
    Bits { stream: BitStream, window: u64, shift: u32, scale: f64 },
}

/// Streaming forward orbit `x0, f(x0), f^2(x0), ...`.
///
/// Interval-map orbits stop after an iterate lands on the critical set;
/// [`OrbitIter::truncation`] then reports where. Symbolic doubling orbits
/// are exact shifts of their bit sequence and ignore `x0`.
pub struct OrbitIter<'a> {
    system: &'a System,
    state: State,
    index: usize,
    check_critical: bool,
    truncation: Option<Truncation>,
}

impl<'a> OrbitIter<'a> {
    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }
}

impl Iterator for OrbitIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.truncation.is_some() {
            return None;
        }
        let index = self.index;
        self.index += 1;
        match &mut self.state {
            State::Map(p) => {
                let current = *p;
                if !current.x().is_finite() || !current.y().is_finite() {
                    self.truncation = Some(Truncation::NonFinite { index });
                    return None;
                }
                if self.check_critical && self.system.is_critical(current.x()) {
                    self.truncation = Some(Truncation::CriticalCollision { index, x: current.x() });
                } else {
                    *p = self.system.evaluate(current);
                }
                Some(current)
            }
            State::Bits { stream, window, shift, scale } => {
                let current = Point::new((*window >> *shift) as f64 * *scale);
                *window = (*window << 1) | stream.next_bit() as u64;
                Some(current)
            }
        }
    }
}

impl System {
    /// The initial point of a symbolic orbit (its first `B` bits).
    pub fn initial_point(&self) -> Option<Point> {
        match self.family() {
            Family::SymbolicDoubling { .. } => self.iter_orbit(Point::default()).ok()?.next(),
            _ => None,
        }
    }

    pub fn iter_orbit(&self, x0: Point) -> Result<OrbitIter<'_>> {
        let state = match self.family() {
            Family::SymbolicDoubling { bits } => {
                let mut stream = bits.stream();
                let mut window = 0u64;
                for _ in 0..64 {
                    window = (window << 1) | stream.next_bit() as u64;
                }
                let precision = bits.precision();
                State::Bits { stream, window, shift: 64 - precision, scale: (0.5f64).powi(precision as i32) }
            }
            _ => {
                if !self.space().contains(x0) {
                    return Err(Error::contract(format!("initial point {x0:?} is not in the {:?}", self.space())));
                }
                State::Map(x0)
            }
        };
        let check_critical = self.critical_set().map(|c| !c.is_empty()).unwrap_or(false);
        Ok(OrbitIter { system: self, state, index: 0, check_critical, truncation: None })
    }

    /// The first `n` points of the orbit of `x0` (fewer if truncated).
    pub fn orbit(&self, x0: Point, n: usize) -> Result<Orbit> {
        let mut it = self.iter_orbit(x0)?;
        let points: Vec<Point> = it.by_ref().take(n).collect();
        Ok(Orbit { points, truncation: it.truncation() })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{bits_to_point, BitSource, BlockProgram};
    use super::*;

    #[test]
    fn doubling_period_two() {
        let o = System::doubling().orbit(Point::new(1.0 / 3.0), 4).unwrap();
        let xs: Vec<f64> = o.points.iter().map(|p| p.x()).collect();
        // Each doubling step shifts one significand bit out, so agreement is
        // to a few ulps rather than exact.
        for (x, e) in xs.iter().zip([1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0]) {
            assert!((x - e).abs() < 1e-15, "{x} vs {e}");
        }
        assert!(o.truncation.is_none());
    }

    #[test]
    fn neutral_fixed_point() {
        let o = System::manneville_pomeau(1.0).unwrap().orbit(Point::new(0.0), 3).unwrap();
        assert_eq!(o.points, vec![Point::new(0.0); 3]);
    }

    #[test]
    fn symbolic_orbit_matches_bit_shift_oracle() {
        let program: BlockProgram = "(0)x(4);(01)x(2)".parse().unwrap();
        let bits = program.prefix(8 + 53);
        let sys = System::symbolic(BitSource::Program(program)).unwrap();
        let o = sys.orbit(Point::default(), 8).unwrap();
        for (j, p) in o.points.iter().enumerate() {
            assert_eq!(p.x(), bits_to_point(&bits[j..j + 53]), "iterate {j}");
        }
        // 0.00000101... then 0.0000101..., shifted stepwise.
        assert_eq!(o.points[3].x(), bits_to_point(&bits[3..56]));
        assert!(o.points[0].x() < 1.0 / 16.0);
    }

    #[test]
    fn critical_collision_truncates() {
        let o = System::logistic(1.0).unwrap().orbit(Point::new(0.25), 10).unwrap();
        // 0.25 -> 0.75 -> 0.75 ... is a fixed point, no truncation
        assert_eq!(o.points.len(), 10);
        let o = System::logistic(1.0).unwrap().orbit(Point::new(0.5), 10).unwrap();
        assert_eq!(o.points, vec![Point::new(0.5)]);
        assert_eq!(o.truncation, Some(Truncation::CriticalCollision { index: 0, x: 0.5 }));
    }

    #[test]
    fn initial_point_outside_space_rejected() {
        assert!(System::doubling().orbit(Point::new(1.5), 3).is_err());
        assert!(System::tent().orbit(Point::xy(0.5, 0.2), 3).is_err());
    }
}
