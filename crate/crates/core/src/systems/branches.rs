use super::family::mp_power;
use super::{Family, System};
use crate::{Error, Result};

/// Monotone branch structure of a one-dimensional map.
#[derive(Clone, Debug, PartialEq)]
pub enum Branches {
    /// Interval map: closed laps `[a, b]` covering `[0, 1]`, with `f`
    /// continuous and strictly monotone on each. Interior lap endpoints
    /// are critical points.
    Interval { laps: Vec<[f64; 2]> },
    /// Circle map with a strictly increasing lift `F`, `F(x + 1) = F(x) + degree`,
    /// `F(0) = 0`.
    Circle { degree: u32 },
}

impl System {
    pub fn branches(&self) -> Result<Branches> {
        match self.family() {
            Family::Logistic { .. } | Family::Tent => Ok(Branches::Interval { laps: vec![[0.0, 0.5], [0.5, 1.0]] }),
            Family::Contraction { .. } => Ok(Branches::Interval { laps: vec![[0.0, 1.0]] }),
            Family::Doubling | Family::SymbolicDoubling { .. } | Family::MannevillePomeau { .. } => {
                Ok(Branches::Circle { degree: 2 })
            }
            other => Err(Error::unsupported(format!("{} has no one-dimensional branch structure", other.name()))),
        }
    }

    /// Lap index of an interval-map point, `None` when `x` sits on an
    /// interior lap boundary (a critical point).
    pub fn lap_of(&self, x: f64) -> Option<usize> {
        match self.branches().ok()? {
            Branches::Interval { laps } => {
                if self.is_critical(x) {
                    return None;
                }
                laps.iter().position(|&[a, b]| x >= a && x <= b)
            }
            Branches::Circle { .. } => Some(0),
        }
    }

    /// `f` on lap `lap`, without clamping or reduction.
    pub fn lap_eval(&self, _lap: usize, x: f64) -> f64 {
        match self.family() {
            Family::Logistic { t } => 4.0 * t * x * (1.0 - x),
            Family::Tent => 1.0 - (2.0 * x - 1.0).abs(),
            Family::Contraction { factor } => factor * x,
            _ => self.lift(x),
        }
    }

    /// Inverse of `f` restricted to lap `lap`, for `y` in the lap image.
    pub fn lap_inverse(&self, lap: usize, y: f64) -> f64 {
        match self.family() {
            Family::Logistic { t } => {
                let r = (1.0 - y / t).max(0.0).sqrt();
                if lap == 0 {
                    (1.0 - r) / 2.0
                } else {
                    (1.0 + r) / 2.0
                }
            }
            Family::Tent => {
                if lap == 0 {
                    y / 2.0
                } else {
                    1.0 - y / 2.0
                }
            }
            Family::Contraction { factor } => y / factor,
            _ => self.lift_inverse(y),
        }
    }

    /// The lift `F` of a circle map.
    pub fn lift(&self, x: f64) -> f64 {
        match self.family() {
            Family::MannevillePomeau { gamma } => {
                let k = x.floor();
                let r = x - k;
                r + mp_power(r, *gamma) + 2.0 * k
            }
            _ => 2.0 * x,
        }
    }

    /// `F^{-1}` of a circle-map lift.
    pub fn lift_inverse(&self, y: f64) -> f64 {
        match self.family() {
            Family::MannevillePomeau { gamma } => {
                let k = (y / 2.0).floor();
                let r = y - 2.0 * k;
                mp_inverse_unit(r, *gamma) + k
            }
            _ => y / 2.0,
        }
    }
}

/// Solves `u + u^(1+gamma) = r` for `u` in `[0, 1]`, `r` in `[0, 2]`.
/// Safeguarded Newton: the left side is convex and increasing.
fn mp_inverse_unit(r: f64, gamma: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut u = (r / 2.0).clamp(0.0, 1.0);
    for _ in 0..100 {
        let g = u + mp_power(u, gamma) - r;
        if g > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let dg = 1.0 + (1.0 + gamma) * u.powf(gamma);
        let mut next = u - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 1e-17 * u.abs().max(1e-300) || hi - lo <= f64::EPSILON * hi {
            return next;
        }
        u = next;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lap_inverses_invert() {
        for sys in [System::logistic(0.8).unwrap(), System::tent(), System::contraction(0.5).unwrap()] {
            let Branches::Interval { laps } = sys.branches().unwrap() else { panic!() };
            for (i, &[a, b]) in laps.iter().enumerate() {
                for k in 0..=20 {
                    let x = a + (b - a) * k as f64 / 20.0;
                    let y = sys.lap_eval(i, x);
                    assert!((sys.lap_inverse(i, y) - x).abs() < 1e-7, "{sys} lap {i} x {x}");
                }
            }
        }
    }

    #[test]
    fn circle_lift_inverse() {
        for sys in [System::doubling(), System::manneville_pomeau(1.0).unwrap(), System::manneville_pomeau(2.5).unwrap()]
        {
            for k in -20..=40 {
                let x = k as f64 / 13.0;
                let y = sys.lift(x);
                assert!((sys.lift_inverse(y) - x).abs() < 1e-12, "{sys} x {x}");
                assert!((sys.lift(x + 1.0) - y - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lap_of_flags_critical_point() {
        let sys = System::logistic(1.0).unwrap();
        assert_eq!(sys.lap_of(0.5), None);
        assert_eq!(sys.lap_of(0.2), Some(0));
        assert_eq!(sys.lap_of(0.9), Some(1));
    }
}
