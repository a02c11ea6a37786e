use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_KNOTS: usize = 64;

/// A continuous function on the circle given by values at uniform knots
/// `i / K`, interpolated linearly and periodically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhiTable {
    values: Vec<f64>,
}

impl PhiTable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::config("phi table needs at least two knots"));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::config(format!("phi table value {v} outside [0, 1]")));
        }
        Ok(PhiTable { values })
    }

    pub fn constant(value: f64) -> Result<Self> {
        PhiTable::new(vec![value; DEFAULT_KNOTS])
    }

    pub fn from_fn(knots: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        PhiTable::new((0..knots).map(|i| f(i as f64 / knots as f64)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.values.len();
        let s = x.rem_euclid(1.0) * k as f64;
        let i = (s.floor() as usize).min(k - 1);
        let frac = s - i as f64;
        let a = self.values[i];
        let b = self.values[(i + 1) % k];
        a + (b - a) * frac
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<f64>> for PhiTable {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        PhiTable::new(values)
    }
}

impl From<PhiTable> for Vec<f64> {
    fn from(t: PhiTable) -> Self {
        t.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_periodically() {
        let t = PhiTable::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(t.eval(0.0), 0.0);
        assert_eq!(t.eval(0.25), 0.5);
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(0.75), 0.5);
        assert_eq!(t.eval(1.0), 0.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PhiTable::new(vec![0.5, 1.2]).is_err());
        assert!(PhiTable::new(vec![0.5]).is_err());
    }
}
