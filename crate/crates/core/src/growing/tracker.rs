use crate::systems::{Branches, System, Truncation};
use crate::{Error, Result};

/// Follows the monotone branch of `f^n` containing `x`.
///
/// For interval maps the image `I_n = f^n(J_n)` is updated as
/// `I_n = f(I_{n-1} ∩ lap(f^{n-1} x))`. Circle maps in this crate have full
/// branches, so their image is always the whole circle. The orbit and the
/// lap itinerary are kept for pullbacks.
#[derive(Clone, Debug)]
pub struct BranchTracker<'a> {
    system: &'a System,
    laps: Option<Vec<[f64; 2]>>,
    image: [f64; 2],
    orbit: Vec<f64>,
    itinerary: Vec<usize>,
    truncation: Option<Truncation>,
}

impl<'a> BranchTracker<'a> {
    pub fn new(system: &'a System, x: f64) -> Result<Self> {
        let laps = match system.branches()? {
            Branches::Interval { laps } => Some(laps),
            Branches::Circle { .. } => None,
        };
        if !system.space().contains(crate::systems::Point::new(x)) {
            return Err(Error::contract(format!("{x} is not in the {:?}", system.space())));
        }
        Ok(BranchTracker { system, laps, image: [0.0, 1.0], orbit: vec![x], itinerary: Vec::new(), truncation: None })
    }

    pub fn n(&self) -> usize {
        self.itinerary.len()
    }

    pub fn is_circle(&self) -> bool {
        self.laps.is_none()
    }

    /// `f^n(J_n)`; `[0, 1]` stands for the whole circle on circle maps.
    pub fn image(&self) -> [f64; 2] {
        self.image
    }

    pub fn current(&self) -> f64 {
        *self.orbit.last().expect("orbit is never empty")
    }

    pub fn orbit(&self) -> &[f64] {
        &self.orbit
    }

    /// Lap of `f^j x` for `j < n`.
    pub fn itinerary(&self) -> &[usize] {
        &self.itinerary
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// Advances one iterate. Returns `false` (and records the truncation)
    /// when the current point is critical, where no monotone branch exists.
    pub fn advance(&mut self) -> bool {
        if self.truncation.is_some() {
            return false;
        }
        let y = self.current();
        let lap = match self.system.lap_of(y) {
            Some(l) => l,
            None => {
                self.truncation = Some(Truncation::CriticalCollision { index: self.n(), x: y });
                return false;
            }
        };
        if let Some(laps) = &self.laps {
            let [la, lb] = laps[lap];
            let (a, b) = (self.image[0].max(la), self.image[1].min(lb));
            let (fa, fb) = (self.system.lap_eval(lap, a), self.system.lap_eval(lap, b));
            self.image = [fa.min(fb).clamp(0.0, 1.0), fa.max(fb).clamp(0.0, 1.0)];
        }
        self.itinerary.push(lap);
        self.orbit.push(self.system.evaluate(crate::systems::Point::new(y)).x());
        true
    }
}
