//! Time averages along orbits: empirical measures, Birkhoff averages and
//! their oscillation, and the statistical spectrum of an orbit.

mod birkhoff;
mod measure;
mod observable;
mod schedule;
mod spectrum;

pub use birkhoff::{birkhoff_series, visiting_frequency, Checkpoint, OscillationReport, Region};
pub use measure::{empirical_measure, measure_distance, EmpiricalMeasure, TestFunctionFamily, DEFAULT_TRUNCATION};
pub(crate) use measure::FeatureTable;
pub use observable::Observable;
pub use schedule::{CompensatedSum, Schedule, DEFAULT_RATIO};
pub use spectrum::{
    omega_limit_estimate, statistical_omega_limit, statistical_spectrum, SpectrumEstimate, SpectrumRow,
    DEFAULT_CLUSTER_RADIUS, MIN_TAIL_CHECKPOINTS,
};
