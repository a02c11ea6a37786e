use std::fmt;

use serde::{Deserialize, Serialize};

use super::{wrap_unit, BitSource, PhiTable, Point, Space};
use crate::{Error, Result};

/// Distance to the critical set below which a point counts as critical.
pub const CRITICAL_EPS: f64 = f64::EPSILON;

pub const GAMMA_RANGE: (f64, f64) = (1.0, 16.0);
const CAT_ENTRY_LIMIT: i64 = 16;

fn default_factor() -> f64 {
    0.5
}

fn default_cat() -> [[i64; 2]; 2] {
    [[2, 1], [1, 1]]
}

/// The example maps. Parameter ranges are checked by [`System::new`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `x -> 2x mod 1` on the circle.
    Doubling,
    /// `x -> 4 t x (1 - x)` on `[0, 1]`, `t` in `(0, 1]`.
    Logistic { t: f64 },
    /// `x -> x + x^(1+gamma) mod 1` on the circle, `gamma` in `[1, 16]`:
    /// a neutral fixed point at 0, full branches otherwise.
    MannevillePomeau { gamma: f64 },
    /// `x -> 1 - |2x - 1|` on `[0, 1]`.
    Tent,
    /// `x -> factor * x` on `[0, 1]`, `factor` in `(0, 1)`.
    Contraction {
        #[serde(default = "default_factor")]
        factor: f64,
    },
    /// Linear toral automorphism, hyperbolic with determinant +-1.
    CatMap {
        #[serde(default = "default_cat")]
        matrix: [[i64; 2]; 2],
    },
    /// `([x], t) -> ([2x], phi([x]) (1 - |2t - 1|))` on circle x interval.
    SkewTent { phi: PhiTable },
    /// `([x], t) -> ([2x], 4 phi([x]) t (1 - t))` on circle x interval.
    SkewLogistic { phi: PhiTable },
    /// The doubling map iterated exactly as a shift on a binary itinerary.
    SymbolicDoubling { bits: BitSource },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Doubling => "doubling",
            Family::Logistic { .. } => "logistic",
            Family::MannevillePomeau { .. } => "manneville_pomeau",
            Family::Tent => "tent",
            Family::Contraction { .. } => "contraction",
            Family::CatMap { .. } => "cat_map",
            Family::SkewTent { .. } => "skew_tent",
            Family::SkewLogistic { .. } => "skew_logistic",
            Family::SymbolicDoubling { .. } => "symbolic_doubling",
        }
    }
}

/// A validated map on a compact phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct System {
    family: Family,
}

impl TryFrom<Family> for System {
    type Error = Error;

    fn try_from(family: Family) -> Result<Self> {
        System::new(family)
    }
}

impl From<System> for Family {
    fn from(s: System) -> Self {
        s.family
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Logistic { t } => write!(f, "logistic(t={t})"),
            Family::MannevillePomeau { gamma } => write!(f, "manneville_pomeau(gamma={gamma})"),
            Family::Contraction { factor } => write!(f, "contraction({factor})"),
            Family::CatMap { matrix } => write!(f, "cat_map({matrix:?})"),
            Family::SymbolicDoubling { bits: BitSource::Program(p) } => write!(f, "symbolic_doubling({p})"),
            Family::SymbolicDoubling { bits: BitSource::Random { seed, .. } } => {
                write!(f, "symbolic_doubling(random seed {seed})")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl System {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Logistic { t } if !(*t > 0.0 && *t <= 1.0) => {
                return Err(Error::config(format!("logistic t = {t} outside (0, 1]")));
            }
            Family::MannevillePomeau { gamma } if !(*gamma >= GAMMA_RANGE.0 && *gamma <= GAMMA_RANGE.1) => {
                return Err(Error::config(format!("manneville_pomeau gamma = {gamma} outside [1, 16]")));
            }
            Family::Contraction { factor } if !(*factor > 0.0 && *factor < 1.0) => {
                return Err(Error::config(format!("contraction factor = {factor} outside (0, 1)")));
            }
            Family::CatMap { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                if matrix.iter().flatten().any(|v| v.abs() > CAT_ENTRY_LIMIT) {
                    return Err(Error::config("cat_map entries must be at most 16 in absolute value"));
                }
                let det = a * d - b * c;
                if det.abs() != 1 {
                    return Err(Error::config(format!("cat_map determinant {det} is not +-1")));
                }
                let trace = a + d;
                let hyperbolic = if det == 1 { trace.abs() > 2 } else { trace != 0 };
                if !hyperbolic {
                    return Err(Error::config("cat_map matrix is not hyperbolic"));
                }
            }
            Family::SymbolicDoubling { bits } if !(1..=53).contains(&bits.precision()) => {
                return Err(Error::config(format!("bit budget {} outside 1..=53", bits.precision())));
            }
            _ => {}
        }
        Ok(System { family })
    }

    pub fn doubling() -> Self {
        System { family: Family::Doubling }
    }

    pub fn tent() -> Self {
        System { family: Family::Tent }
    }

    pub fn logistic(t: f64) -> Result<Self> {
        System::new(Family::Logistic { t })
    }

    pub fn manneville_pomeau(gamma: f64) -> Result<Self> {
        System::new(Family::MannevillePomeau { gamma })
    }

    pub fn contraction(factor: f64) -> Result<Self> {
        System::new(Family::Contraction { factor })
    }

    pub fn cat_map() -> Self {
        System { family: Family::CatMap { matrix: default_cat() } }
    }

    pub fn skew_tent(phi: PhiTable) -> Self {
        System { family: Family::SkewTent { phi } }
    }

    pub fn skew_logistic(phi: PhiTable) -> Self {
        System { family: Family::SkewLogistic { phi } }
    }

    pub fn symbolic(bits: BitSource) -> Result<Self> {
        System::new(Family::SymbolicDoubling { bits })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn space(&self) -> Space {
        match self.family {
            Family::Doubling | Family::MannevillePomeau { .. } | Family::SymbolicDoubling { .. } => Space::Circle,
            Family::Logistic { .. } | Family::Tent | Family::Contraction { .. } => Space::Interval,
            Family::CatMap { .. } => Space::Torus,
            Family::SkewTent { .. } | Family::SkewLogistic { .. } => Space::CircleInterval,
        }
    }

    pub fn dimension(&self) -> usize {
        self.space().dimension()
    }

    /// `f(p)`, reduced into the space.
    pub fn evaluate(&self, p: Point) -> Point {
        let x = p.x();
        match &self.family {
            Family::Doubling | Family::SymbolicDoubling { .. } => Point::new(wrap_unit(2.0 * x)),
            Family::Logistic { t } => Point::new((4.0 * t * x * (1.0 - x)).clamp(0.0, 1.0)),
            Family::MannevillePomeau { gamma } => Point::new(wrap_unit(x + mp_power(x, *gamma))),
            Family::Tent => Point::new((1.0 - (2.0 * x - 1.0).abs()).clamp(0.0, 1.0)),
            Family::Contraction { factor } => Point::new(factor * x),
            Family::CatMap { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
                Point::xy(wrap_unit(a * x + b * p.y()), wrap_unit(c * x + d * p.y()))
            }
            Family::SkewTent { phi } => {
                let t = p.y();
                Point::xy(wrap_unit(2.0 * x), (phi.eval(x) * (1.0 - (2.0 * t - 1.0).abs())).clamp(0.0, 1.0))
            }
            Family::SkewLogistic { phi } => {
                let t = p.y();
                Point::xy(wrap_unit(2.0 * x), (4.0 * phi.eval(x) * t * (1.0 - t)).clamp(0.0, 1.0))
            }
        }
    }

    /// The critical set of a one-dimensional family.
    pub fn critical_set(&self) -> Result<Vec<f64>> {
        match self.family {
            Family::Logistic { .. } | Family::Tent => Ok(vec![0.5]),
            Family::Doubling
            | Family::MannevillePomeau { .. }
            | Family::Contraction { .. }
            | Family::SymbolicDoubling { .. } => Ok(Vec::new()),
            _ => Err(Error::unsupported(format!("{} is not one-dimensional", self.family.name()))),
        }
    }

    /// Whether `x` is within machine epsilon of the critical set.
    pub fn is_critical(&self, x: f64) -> bool {
        self.critical_set()
            .map(|c| c.iter().any(|&c| (x - c).abs() <= CRITICAL_EPS * c.abs().max(1.0)))
            .unwrap_or(false)
    }

    /// `log |f'(x)|` for one-dimensional families; for the cat map the log
    /// of the unstable eigenvalue (constant on the torus).
    pub fn derivative_log_norm(&self, p: Point) -> Result<f64> {
        let x = p.x();
        if self.is_critical(x) {
            return Err(Error::Singularity { x });
        }
        match &self.family {
            Family::Doubling | Family::SymbolicDoubling { .. } | Family::Tent => Ok(std::f64::consts::LN_2),
            Family::Logistic { t } => Ok((4.0 * t * (1.0 - 2.0 * x)).abs().ln()),
            Family::MannevillePomeau { gamma } => Ok((1.0 + (1.0 + gamma) * x.powf(*gamma)).ln()),
            Family::Contraction { factor } => Ok(factor.ln()),
            Family::CatMap { matrix } => {
                let [[a, b], [c, d]] = *matrix;
                let trace = (a + d) as f64;
                let det = (a * d - b * c) as f64;
                let disc = (trace * trace - 4.0 * det).sqrt();
                Ok(((trace.abs() + disc) / 2.0).ln())
            }
            Family::SkewTent { .. } | Family::SkewLogistic { .. } => {
                Err(Error::unsupported("skew products have no scalar expansion rate"))
            }
        }
    }
}

#[inline]
pub(crate) fn mp_power(x: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        x * x
    } else {
        x.powf(1.0 + gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn evaluate_examples() {
        assert_eq!(System::doubling().evaluate(Point::new(0.25)), Point::new(0.5));
        assert_eq!(System::logistic(1.0).unwrap().evaluate(Point::new(0.5)), Point::new(1.0));
        assert_eq!(System::cat_map().evaluate(Point::xy(0.5, 0.5)), Point::xy(0.5, 0.0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(System::doubling().derivative_log_norm(Point::new(0.3)).unwrap(), LN_2);
        assert!(matches!(
            System::logistic(1.0).unwrap().derivative_log_norm(Point::new(0.5)),
            Err(Error::Singularity { .. })
        ));
        let cat = System::cat_map().derivative_log_norm(Point::xy(0.1, 0.7)).unwrap();
        assert!((cat - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn critical_sets() {
        assert!(System::doubling().critical_set().unwrap().is_empty());
        assert_eq!(System::logistic(0.7).unwrap().critical_set().unwrap(), vec![0.5]);
        assert_eq!(System::tent().critical_set().unwrap(), vec![0.5]);
        assert!(System::cat_map().critical_set().is_err());
    }

    #[test]
    fn logistic_critical_set_is_zero_set_of_derivative() {
        let sys = System::logistic(0.9).unwrap();
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let deriv = 4.0 * 0.9 * (1.0 - 2.0 * x);
            assert_eq!(deriv == 0.0, sys.is_critical(x), "x = {x}");
        }
    }

    #[test]
    fn manneville_pomeau_is_neutral_at_zero() {
        let mp = System::manneville_pomeau(1.0).unwrap();
        assert_eq!(mp.evaluate(Point::new(0.0)), Point::new(0.0));
        assert_eq!(mp.derivative_log_norm(Point::new(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(System::logistic(1.2).is_err());
        assert!(System::logistic(0.0).is_err());
        assert!(System::manneville_pomeau(0.5).is_err());
        assert!(System::contraction(1.0).is_err());
        assert!(System::new(Family::CatMap { matrix: [[1, 1], [0, 1]] }).is_err());
        assert!(System::new(Family::CatMap { matrix: [[2, 0], [0, 1]] }).is_err());
        assert!(System::symbolic(BitSource::Random { seed: 0, precision: 60 }).is_err());
    }

    #[test]
    fn serde_rejects_invalid_parameters() {
        let bad: std::result::Result<System, _> = serde_json::from_str(r#"{"family":"logistic","t":3.0}"#);
        assert!(bad.is_err());
        let good: System = serde_json::from_str(r#"{"family":"contraction"}"#).unwrap();
        assert_eq!(good.family(), &Family::Contraction { factor: 0.5 });
    }
}
