use serde::Serialize;

use super::BranchTracker;
use crate::systems::{System, Truncation};
use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_SIGMA: f64 = 0.9;
/// Pre-balls are pulled back only up to this order; beyond it they are far
/// below double precision for every expanding example.
pub const PREBALL_MAX_ORDER: usize = 256;
/// Pullbacks narrower than this are not representable and are dropped.
const MIN_WIDTH: f64 = 1e-13;

/// The component `V` of `f^{-n}(B_delta(q))` containing `x`, with the
/// images `f^j(V)` for `j = 0..=n` (lifted coordinates on the circle).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreBall {
    pub n: usize,
    pub q: f64,
    pub delta: f64,
    pub left: f64,
    pub right: f64,
    pub diameter: f64,
    #[serde(skip)]
    pub levels: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowingTime {
    pub n: usize,
    pub q: f64,
    /// `f^n(J_n)`.
    pub image: [f64; 2],
    pub pre_ball: Option<PreBall>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowingTimeRecord {
    pub x: f64,
    pub delta: f64,
    pub budget: usize,
    /// Iterates actually tracked (fewer than `budget` on truncation).
    pub evaluated: usize,
    pub times: Vec<GrowingTime>,
    pub truncation: Option<Truncation>,
}

impl GrowingTimeRecord {
    /// Fraction of `1..=budget` that are growing times.
    pub fn density(&self) -> f64 {
        self.times.len() as f64 / self.budget as f64
    }

    /// `n,q,left,right,diameter` rows; pre-ball columns are empty when the
    /// pre-ball was not computed.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,q,left,right,diameter\n");
        for t in &self.times {
            match &t.pre_ball {
                Some(v) => out.push_str(&format!("{},{},{},{},{}\n", t.n, t.q, v.left, v.right, v.diameter)),
                None => out.push_str(&format!("{},{},,,\n", t.n, t.q)),
            }
        }
        out
    }
}

fn check_delta(system: &System, delta: f64) -> Result<()> {
    // A quarter of the length of the phase space (the circle has length 1).
    let limit = 0.25;
    if system.dimension() != 1 {
        return Err(Error::unsupported("one-dimensional families only"));
    }
    if !(delta > 0.0 && delta < limit) {
        return Err(Error::config(format!("delta must lie in (0, {limit})")));
    }
    Ok(())
}

/// The witness center at the tracker's current time, if it is a
/// `delta`-growing time.
fn witness(tracker: &BranchTracker, delta: f64) -> Option<f64> {
    let y = tracker.current();
    if tracker.is_circle() {
        return Some(y);
    }
    let [a, b] = tracker.image();
    if b - a < 2.0 * delta {
        return None;
    }
    let q = y.clamp(a + delta, b - delta);
    ((y - q).abs() < delta / 2.0).then_some(q)
}

/// Pulls `(q - delta, q + delta)` back along the tracked branch.
fn pull_back(system: &System, tracker: &BranchTracker, q: f64, delta: f64) -> Option<PreBall> {
    let n = tracker.n();
    let orbit = tracker.orbit();
    let laps = tracker.itinerary();
    let mut levels = vec![[0.0; 2]; n + 1];
    let (mut u, mut v) = (q - delta, q + delta);
    levels[n] = [u, v];
    for j in (1..=n).rev() {
        let (a, b) = if tracker.is_circle() {
            let lifted = system.lift(orbit[j - 1]);
            let shift = (lifted - orbit[j]).round();
            (system.lift_inverse(u + shift), system.lift_inverse(v + shift))
        } else {
            let (a, b) = (system.lap_inverse(laps[j - 1], u), system.lap_inverse(laps[j - 1], v));
            (a.min(b), a.max(b))
        };
        (u, v) = (a, b);
        if !(v - u >= MIN_WIDTH) {
            return None;
        }
        levels[j - 1] = [u, v];
    }
    Some(PreBall { n, q, delta, left: u, right: v, diameter: v - u, levels })
}

/// Growing times of `x` for `n = 1..=budget`, with pre-balls up to
/// [`PREBALL_MAX_ORDER`].
pub fn growing_times(system: &System, x: f64, delta: f64, budget: usize) -> Result<GrowingTimeRecord> {
    check_delta(system, delta)?;
    let mut tracker = BranchTracker::new(system, x)?;
    let mut times = Vec::new();
    for _ in 0..budget {
        if !tracker.advance() {
            break;
        }
        if let Some(q) = witness(&tracker, delta) {
            let n = tracker.n();
            let pre_ball = if n <= PREBALL_MAX_ORDER { pull_back(system, &tracker, q, delta) } else { None };
            times.push(GrowingTime { n, q, image: tracker.image(), pre_ball });
        }
    }
    Ok(GrowingTimeRecord {
        x,
        delta,
        budget,
        evaluated: tracker.n(),
        times,
        truncation: tracker.truncation(),
    })
}

/// `f^k` of a point of the pre-ball, following the pre-ball's branch in
/// lifted coordinates.
fn forward_in_branch(system: &System, tracker: &BranchTracker, mut y: f64, k: usize) -> f64 {
    let orbit = tracker.orbit();
    for j in 0..k {
        y = if tracker.is_circle() {
            let lifted = system.lift(y);
            // keep the image next to the orbit point it shadows
            lifted - (system.lift(orbit[j]) - orbit[j + 1]).round()
        } else {
            system.lap_eval(tracker.itinerary()[j], y)
        };
    }
    y
}

/// The pre-ball at time `n`, when `n` is a `delta`-growing time and the
/// backward contraction `|f^{n-j} y - f^{n-j} z| <= sigma^j |f^n y - f^n z|`
/// holds for `1 <= j < n` on the endpoint and midpoint pairs of `V`.
pub fn pre_ball(system: &System, x: f64, n: usize, delta: f64, sigma: f64) -> Result<Option<PreBall>> {
    check_delta(system, delta)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::config("sigma must lie in (0, 1)"));
    }
    if n == 0 {
        return Err(Error::config("pre-balls need n >= 1"));
    }
    let mut tracker = BranchTracker::new(system, x)?;
    for _ in 0..n {
        if !tracker.advance() {
            return Ok(None);
        }
    }
    let Some(q) = witness(&tracker, delta) else { return Ok(None) };
    let Some(ball) = pull_back(system, &tracker, q, delta) else { return Ok(None) };
    let mid = 0.5 * (ball.left + ball.right);
    let mut mids = Vec::with_capacity(n + 1);
    mids.push(mid);
    for k in 1..=n {
        mids.push(forward_in_branch(system, &tracker, mid, k));
    }
    let triple = |k: usize| (ball.levels[k][0], mids[k], ball.levels[k][1]);
    let (l_n, m_n, r_n) = triple(n);
    let top = [(r_n - l_n).abs(), (m_n - l_n).abs(), (r_n - m_n).abs()];
    let mut factor = 1.0;
    for j in 1..n {
        factor *= sigma;
        let (l, m, r) = triple(n - j);
        let here = [(r - l).abs(), (m - l).abs(), (r - m).abs()];
        for (d, d_top) in here.iter().zip(&top) {
            if *d > factor * d_top * (1.0 + 1e-9) {
                return Ok(None);
            }
        }
    }
    Ok(Some(ball))
}
