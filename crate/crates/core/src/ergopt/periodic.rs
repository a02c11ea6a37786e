use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::orbitstats::CompensatedSum;
use crate::systems::{Family, Point, System, Word};
use crate::{Error, Result};

pub const MAX_DOUBLING_PERIOD: u32 = 20;
pub const MAX_CAT_PERIOD: u32 = 12;
/// Ceiling on the number of candidate points examined for one period.
const MAX_CANDIDATES: i128 = 1 << 24;

/// A point with rational coordinates; the second coordinate is 0 on the
/// circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactPoint(pub [Ratio<i128>; 2]);

impl ExactPoint {
    pub fn to_point(self) -> Point {
        let f = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
        Point::xy(f(self.0[0]), f(self.0[1]))
    }
}

impl Ord for ExactPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0[0].cmp(&other.0[0]).then_with(|| self.0[1].cmp(&other.0[1]))
    }
}

impl PartialOrd for ExactPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for ExactPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [x, y] = self.0;
        s.collect_seq([x.to_string(), y.to_string()])
    }
}

/// A periodic orbit listed from its lexicographically smallest point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicOrbit {
    pub period: u32,
    pub points: Vec<ExactPoint>,
    /// Binary itinerary of the first point (doubling orbits only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub itinerary: Option<Word>,
}

impl PeriodicOrbit {
    /// `(1/p) sum phi(x_i)` in compensated arithmetic.
    pub fn average(&self, phi: impl Fn(Point) -> f64) -> f64 {
        let mut s = CompensatedSum::default();
        for p in &self.points {
            s.add(phi(p.to_point()));
        }
        s.value() / self.period as f64
    }

    /// The doubling orbit with binary itinerary `word` repeated forever,
    /// listed from its smallest point. A word that is a power of a shorter
    /// one yields the orbit of minimal period.
    pub fn doubling_from_word(word: &Word) -> Result<Self> {
        let bits = word.bits();
        if bits.len() as u32 > MAX_DOUBLING_PERIOD {
            return Err(Error::budget(format!("itineraries are capped at {MAX_DOUBLING_PERIOD} symbols")));
        }
        let p = (1..=bits.len())
            .find(|&d| bits.len() % d == 0 && (0..bits.len()).all(|i| bits[i] == bits[i % d]))
            .expect("the word is its own period");
        let value = |rot: usize| (0..p).fold(0u64, |acc, i| (acc << 1) | bits[(i + rot) % p] as u64);
        let k = (0..p).map(value).min().expect("nonempty");
        // All ones is the binary expansion of 1 = 0.
        let q = (1u64 << p) - 1;
        let k = k % q;
        doubling_orbits(p as u32)
            .into_iter()
            .find(|o| o.points[0].0[0] == Ratio::new(k as i128, q as i128))
            .ok_or_else(|| Error::config(format!("itinerary {word} does not name a periodic orbit")))
    }

    fn order_key(&self) -> (u32, ExactPoint) {
        (self.period, self.points[0])
    }
}

/// Every periodic orbit of minimal period at most `max_period`, ordered by
/// period and then by smallest point.
pub fn enumerate_periodic_orbits(system: &System, max_period: u32) -> Result<Vec<PeriodicOrbit>> {
    if max_period == 0 {
        return Err(Error::config("maximal period must be at least 1"));
    }
    let mut out = Vec::new();
    match system.family() {
        Family::Doubling | Family::SymbolicDoubling { .. } => {
            if max_period > MAX_DOUBLING_PERIOD {
                return Err(Error::budget(format!("doubling periods are capped at {MAX_DOUBLING_PERIOD}")));
            }
            for p in 1..=max_period {
                out.extend(doubling_orbits(p));
            }
        }
        Family::CatMap { matrix } => {
            if max_period > MAX_CAT_PERIOD {
                return Err(Error::budget(format!("cat map periods are capped at {MAX_CAT_PERIOD}")));
            }
            for p in 1..=max_period {
                out.extend(cat_orbits(*matrix, p)?);
            }
        }
        other => {
            return Err(Error::unsupported(format!("periodic enumeration for {}", other.name())));
        }
    }
    Ok(out)
}

/// Period-`p` points of `x -> 2x` are `k / (2^p - 1)`; on numerators the
/// map is `k -> 2k mod (2^p - 1)`, a rotation of the `p`-bit word of `k`.
fn doubling_orbits(p: u32) -> Vec<PeriodicOrbit> {
    let q: u64 = (1u64 << p) - 1;
    let step = |k: u64| (2 * k) % q;
    let leaders: Vec<u64> = (0..q.max(1))
        .into_par_iter()
        .filter(|&k| {
            let mut j = step(k);
            let mut len = 1;
            while j != k {
                if j < k {
                    return false;
                }
                j = step(j);
                len += 1;
            }
            len == p
        })
        .collect();
    leaders
        .into_iter()
        .map(|k| {
            let mut points = Vec::with_capacity(p as usize);
            let mut j = k;
            for _ in 0..p {
                points.push(ExactPoint([Ratio::new(j as i128, q as i128), Ratio::from_integer(0)]));
                j = step(j);
            }
            let bits = (0..p).rev().map(|b| (k >> b) & 1 == 1).collect();
            PeriodicOrbit { period: p, points, itinerary: Some(Word::new(bits).expect("nonempty word")) }
        })
        .collect()
}

type Mat = [[i128; 2]; 2];

fn overflow() -> Error {
    Error::budget("integer overflow in periodic-point arithmetic")
}

fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let s = a[i][0]
                .checked_mul(b[0][j])
                .and_then(|x| a[i][1].checked_mul(b[1][j]).and_then(|y| x.checked_add(y)))
                .ok_or_else(overflow)?;
            out[i][j] = s;
        }
    }
    Ok(out)
}

/// Extended Euclid: `(g, s, t)` with `s a + t b = g >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn mul_mod(a: i128, b: i128, m: i128) -> Result<i128> {
    a.rem_euclid(m).checked_mul(b.rem_euclid(m)).map(|v| v % m).ok_or_else(overflow)
}

/// Solutions of `(M^p - I) x in Z^2` are `adj(A) z / det(A)` mod 1. With
/// `D = |det A|` the numerators form the lattice spanned by the columns of
/// `adj(A)` and `D Z^2`, whose lower-triangular basis `(a, b), (0, c)`
/// lists the `D` solutions as `(a i, b i + c j) / D`.
fn cat_orbits(matrix: [[i64; 2]; 2], p: u32) -> Result<Vec<PeriodicOrbit>> {
    let m: Mat = [[matrix[0][0] as i128, matrix[0][1] as i128], [matrix[1][0] as i128, matrix[1][1] as i128]];
    let mut power: Mat = [[1, 0], [0, 1]];
    for _ in 0..p {
        power = mat_mul(&power, &m)?;
    }
    let a_mat = [[power[0][0] - 1, power[0][1]], [power[1][0], power[1][1] - 1]];
    let det = a_mat[0][0]
        .checked_mul(a_mat[1][1])
        .and_then(|x| a_mat[0][1].checked_mul(a_mat[1][0]).and_then(|y| x.checked_sub(y)))
        .ok_or_else(overflow)?;
    if det == 0 {
        return Err(Error::config("M^p - I is singular: the matrix is not hyperbolic"));
    }
    let d = det.abs();
    if d > MAX_CANDIDATES {
        return Err(Error::budget(format!("period {p} has {d} periodic points, above the enumeration ceiling")));
    }
    // Columns of adj(A).
    let g1 = (a_mat[1][1], -a_mat[1][0]);
    let g2 = (-a_mat[0][1], a_mat[0][0]);
    let (h, s, t) = ext_gcd(g1.0, g2.0);
    let (a, u, _) = ext_gcd(h, d);
    let c = d / a;
    debug_assert_eq!(a * c, d);
    let b = (mul_mod(u, s, c)? * g1.1.rem_euclid(c) % c + mul_mod(u, t, c)? * g2.1.rem_euclid(c) % c) % c;

    let step = |v: (i128, i128)| -> (i128, i128) {
        (
            (m[0][0] * v.0 + m[0][1] * v.1).rem_euclid(d),
            (m[1][0] * v.0 + m[1][1] * v.1).rem_euclid(d),
        )
    };
    // |entries| <= 16 and coordinates < D <= 2^24 keep `step` far from overflow.
    let candidates: Vec<(i128, i128)> =
        (0..c).flat_map(|i| (0..a).map(move |j| ((a * i) % d, (b * i + c * j) % d))).collect();
    let leaders: Vec<(i128, i128)> = candidates
        .into_par_iter()
        .filter(|&v| {
            let mut w = step(v);
            let mut len = 1;
            while w != v {
                if w < v || len > p {
                    return false;
                }
                w = step(w);
                len += 1;
            }
            len == p
        })
        .collect();
    let mut orbits: Vec<PeriodicOrbit> = leaders
        .into_iter()
        .map(|v| {
            let mut points = Vec::with_capacity(p as usize);
            let mut w = v;
            for _ in 0..p {
                points.push(ExactPoint([Ratio::new(w.0, d), Ratio::new(w.1, d)]));
                w = step(w);
            }
            PeriodicOrbit { period: p, points, itinerary: None }
        })
        .collect();
    orbits.sort_by_key(|o| o.order_key());
    Ok(orbits)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximizationResult {
    pub value: f64,
    pub witness: PeriodicOrbit,
    pub max_period: u32,
    /// Best orbit average among orbits of each exact minimal period
    /// `1..=max_period`; `None` where no orbit of that period exists.
    pub per_period: Vec<Option<f64>>,
    pub orbits_scanned: usize,
}

/// Maximum of periodic-orbit averages of `phi` over minimal periods up to
/// `max_period`. Ties go to the smaller period, then the smaller point.
pub fn max_birkhoff_over_periodic(
    system: &System,
    phi: impl Fn(Point) -> f64 + Sync,
    max_period: u32,
) -> Result<MaximizationResult> {
    let orbits = enumerate_periodic_orbits(system, max_period)?;
    let averages: Vec<f64> = orbits.par_iter().map(|o| o.average(&phi)).collect();
    let mut per_period = vec![None::<f64>; max_period as usize];
    let mut best: Option<usize> = None;
    for (i, (o, &v)) in orbits.iter().zip(&averages).enumerate() {
        let slot = &mut per_period[o.period as usize - 1];
        *slot = Some(slot.map_or(v, |s| s.max(v)));
        // Orbits arrive in tie-break order, so only a strict improvement
        // replaces the incumbent.
        if best.map_or(true, |b| v > averages[b]) {
            best = Some(i);
        }
    }
    let best = best.ok_or_else(|| Error::budget("no periodic orbits found"))?;
    Ok(MaximizationResult {
        value: averages[best],
        witness: orbits[best].clone(),
        max_period,
        per_period,
        orbits_scanned: orbits.len(),
    })
}
