//! Periodic-orbit ergodic optimization and maximal-oscillation orbits.

mod oscillation;
mod periodic;

pub use oscillation::{block_ends, construct_oscillating_orbit, DEFAULT_GROWTH, FIRST_BLOCK_BITS};
pub use periodic::{
    enumerate_periodic_orbits, max_birkhoff_over_periodic, ExactPoint, MaximizationResult, PeriodicOrbit,
    MAX_CAT_PERIOD, MAX_DOUBLING_PERIOD,
};
