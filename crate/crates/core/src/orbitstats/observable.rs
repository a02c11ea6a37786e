//! Continuous test observables `phi: X -> R`, with a small text syntax:
//! `cos(k)`, `sin(k)`, `cos(k,y)`, `const(c)`, `mean(a,b,...)`.
//! `cos(k)` is the rescaled harmonic `(1 + cos 2 pi k x) / 2`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::systems::Point;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Observable {
    Constant(f64),
    Cos { k: u32, axis: usize },
    Sin { k: u32, axis: usize },
    Mean(Vec<Observable>),
}

impl Observable {
    pub fn cos(k: u32) -> Self {
        Observable::Cos { k, axis: 0 }
    }

    pub fn sin(k: u32) -> Self {
        Observable::Sin { k, axis: 0 }
    }

    /// `(2 + cos 2 pi x + cos 2 pi y) / 4` on the torus.
    pub fn torus_cos() -> Self {
        Observable::Mean(vec![Observable::Cos { k: 1, axis: 0 }, Observable::Cos { k: 1, axis: 1 }])
    }

    pub fn eval(&self, p: Point) -> f64 {
        match self {
            Observable::Constant(c) => *c,
            Observable::Cos { k, axis } => 0.5 * (1.0 + (TAU * *k as f64 * p.0[*axis]).cos()),
            Observable::Sin { k, axis } => 0.5 * (1.0 + (TAU * *k as f64 * p.0[*axis]).sin()),
            Observable::Mean(parts) => parts.iter().map(|o| o.eval(p)).sum::<f64>() / parts.len() as f64,
        }
    }

    /// Bounds `[lo, hi]` containing the range of the observable.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Observable::Constant(c) => (*c, *c),
            Observable::Cos { .. } | Observable::Sin { .. } => (0.0, 1.0),
            Observable::Mean(parts) => {
                let n = parts.len() as f64;
                parts.iter().map(|o| o.bounds()).fold((0.0, 0.0), |(a, b), (lo, hi)| (a + lo / n, b + hi / n))
            }
        }
    }

    pub fn range(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis_name = |a: usize| if a == 0 { "" } else { ",y" };
        match self {
            Observable::Constant(c) => write!(f, "const({c})"),
            Observable::Cos { k, axis } => write!(f, "cos({k}{})", axis_name(*axis)),
            Observable::Sin { k, axis } => write!(f, "sin({k}{})", axis_name(*axis)),
            Observable::Mean(parts) => {
                f.write_str("mean(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        parse(&s)
    }
}

fn parse(s: &str) -> Result<Observable> {
    let bad = || Error::Parse(format!("unrecognized observable '{s}'"));
    let (head, args) = s.split_once('(').ok_or_else(bad)?;
    let args = args.strip_suffix(')').ok_or_else(bad)?;
    match head {
        "const" => Ok(Observable::Constant(args.parse().map_err(|_| bad())?)),
        "cos" | "sin" => {
            let (k, axis) = match args.split_once(',') {
                Some((k, "x")) => (k, 0),
                Some((k, "y")) => (k, 1),
                Some(_) => return Err(bad()),
                None => (args, 0),
            };
            let k: u32 = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::Parse("harmonic order must be at least 1".into()));
            }
            Ok(if head == "cos" { Observable::Cos { k, axis } } else { Observable::Sin { k, axis } })
        }
        "mean" => {
            let parts = split_top_level(args).into_iter().map(parse).collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(bad());
            }
            Ok(Observable::Mean(parts))
        }
        _ => Err(bad()),
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() {
        parts.push(&s[start..]);
    }
    parts
}

impl TryFrom<String> for Observable {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Observable> for String {
    fn from(o: Observable) -> Self {
        o.to_string()
    }
}
