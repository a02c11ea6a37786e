//! One-dimensional expansion diagnostics: growing times and hyperbolic
//! pre-balls, slow recurrence and expansion averages, and local horseshoes.

mod horseshoe;
mod nue;
mod preball;
mod tracker;

pub use horseshoe::{entropy_lower_bound, horseshoe_search, Horseshoe};
pub use nue::{nue_averages, truncated_distance, NueCheckpoint, NueDiagnostics};
pub use preball::{
    growing_times, pre_ball, GrowingTime, GrowingTimeRecord, PreBall, DEFAULT_DELTA, DEFAULT_SIGMA, PREBALL_MAX_ORDER,
};
pub use tracker::BranchTracker;
