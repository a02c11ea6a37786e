//! Attractors and basins on a uniform grid: an outer-approximation
//! transition graph, its strongly connected components, and checks for
//! transitivity and sensitive dependence.

mod attractors;
mod checks;
mod graph;
mod scc;

pub use attractors::{attractors_and_basins, AttractorReport, BasinLabel, DEFAULT_FAT_BLOCK};
pub use checks::{large_omega_estimate, sensitive_dependence_estimate, strong_transitivity_check, Transitivity};
pub use graph::{build_transition_graph, default_samples, TransitionGraph, DEFAULT_PADDING, MIN_RESOLUTION};
pub use scc::{condensation, strongly_connected_components, Components};
