use std::f64::consts::LN_2;

use serde::Serialize;

use crate::systems::{Branches, System};
use crate::{Error, Result};

/// Two disjoint intervals inside `B_eps(p)`, each mapped by an iterate
/// diffeomorphically onto the ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Horseshoe {
    pub u0: [f64; 2],
    pub n0: usize,
    pub u1: [f64; 2],
    pub n1: usize,
}

impl Horseshoe {
    pub fn entropy_lower_bound(&self) -> f64 {
        entropy_lower_bound(self.n0, self.n1)
    }
}

/// `log 2 / max(n0, n1)`.
pub fn entropy_lower_bound(n0: usize, n1: usize) -> f64 {
    LN_2 / n0.max(n1).max(1) as f64
}

const ENDPOINT_TOL: f64 = 1e-9;

/// One pullback step: the components of `f^{-1}((u, v))` on which `f` maps
/// diffeomorphically onto `(u, v)`, as a list of intervals.
fn preimages(system: &System, branches: &Branches, u: f64, v: f64) -> Vec<[f64; 2]> {
    match branches {
        Branches::Interval { laps } => laps
            .iter()
            .enumerate()
            .filter_map(|(i, &[a, b])| {
                let (fa, fb) = (system.lap_eval(i, a), system.lap_eval(i, b));
                let (lo, hi) = (fa.min(fb), fa.max(fb));
                // only laps whose image covers the whole interval
                (lo <= u && v <= hi).then(|| {
                    let (x, y) = (system.lap_inverse(i, u), system.lap_inverse(i, v));
                    [x.min(y), x.max(y)]
                })
            })
            .collect(),
        Branches::Circle { degree } => {
            let base = u.floor();
            let (u, v) = (u - base, v - base);
            (0..*degree)
                .map(|k| {
                    let a = system.lift_inverse(u + k as f64);
                    let b = system.lift_inverse(v + k as f64);
                    let shift = a.floor();
                    [a - shift, b - shift]
                })
                .collect()
        }
    }
}

/// Whether the closure of `w` lies in the open ball `(lo, hi)`, modulo 1
/// on the circle.
fn inside(w: [f64; 2], lo: f64, hi: f64, circle: bool) -> bool {
    if circle {
        let shift = (w[0] - lo).div_euclid(1.0);
        let (a, b) = (w[0] - shift, w[1] - shift);
        a > lo && b < hi
    } else {
        w[0] > lo && w[1] < hi
    }
}

fn disjoint(a: [f64; 2], b: [f64; 2], circle: bool) -> bool {
    if circle {
        // compare as arcs: shift b next to a
        let shift = (b[0] - a[0]).div_euclid(1.0);
        let (b0, b1) = (b[0] - shift, b[1] - shift);
        a[1] < b0 && b1 < a[0] + 1.0
    } else {
        a[1] < b[0] || b[1] < a[0]
    }
}

/// `f^n` of `y` computed branch by branch in lifted coordinates.
fn iterate_lift(system: &System, branches: &Branches, y: f64, n: usize, laps: &[usize]) -> f64 {
    let mut y = y;
    for &lap in laps.iter().take(n) {
        y = match branches {
            Branches::Interval { .. } => system.lap_eval(lap, y),
            Branches::Circle { .. } => system.lift(y),
        };
    }
    y
}

/// Searches pullbacks of `B_eps(p)` of order `1..=n_max` for two disjoint
/// components whose closures lie inside the ball, in order of (order, left
/// endpoint); the first such pair is returned.
pub fn horseshoe_search(system: &System, p: f64, eps: f64, n_max: usize) -> Result<Option<Horseshoe>> {
    // A quarter of the length of the phase space (the circle has length 1).
    let limit = 0.25;
    if system.dimension() != 1 {
        return Err(Error::unsupported("one-dimensional families only"));
    }
    if !(eps > 0.0 && eps < limit) {
        return Err(Error::config(format!("ball radius must lie in (0, {limit})")));
    }
    let branches = system.branches()?;
    let circle = matches!(branches, Branches::Circle { .. });
    let (lo, hi) = (p - eps, p + eps);
    // (interval, lap word from level 0 upward)
    let mut frontier: Vec<([f64; 2], Vec<usize>)> = vec![([lo, hi], Vec::new())];
    let mut found: Vec<([f64; 2], usize)> = Vec::new();
    for n in 1..=n_max {
        let mut next = Vec::new();
        for (w, word) in &frontier {
            for (lap, pre) in preimages(system, &branches, w[0], w[1]).into_iter().enumerate() {
                if pre[1] - pre[0] <= 0.0 {
                    continue;
                }
                let mut laps = vec![lap];
                laps.extend_from_slice(word);
                next.push((pre, laps));
            }
        }
        next.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
        for (w, laps) in &next {
            if !inside(*w, lo, hi, circle) {
                continue;
            }
            // f^n maps the closure onto the closed ball.
            let a = iterate_lift(system, &branches, w[0], n, laps);
            let b = iterate_lift(system, &branches, w[1], n, laps);
            let (a, b) = (a.min(b), a.max(b));
            let shift = if circle { (a - lo).round() } else { 0.0 };
            if (a - shift - lo).abs() > ENDPOINT_TOL || (b - shift - hi).abs() > ENDPOINT_TOL {
                continue;
            }
            if let Some(&(first, n_first)) = found.iter().find(|(u, _)| disjoint(*u, *w, circle)) {
                let (u0, n0, u1, n1) =
                    if first[0] <= w[0] { (first, n_first, *w, n) } else { (*w, n, first, n_first) };
                return Ok(Some(Horseshoe { u0, n0, u1, n1 }));
            }
            found.push((*w, n));
        }
        frontier = next;
    }
    Ok(None)
}
