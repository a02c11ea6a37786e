//! ergolab: a desk-scale laboratory for the ergodic formalism of
//! low-dimensional maps.
//!
//! The crate instantiates visiting frequencies, statistical spectra,
//! topological attractors on a grid, growing times and hyperbolic
//! pre-balls, and a sojourn-time model of the Bowen eye, on a zoo of
//! concrete systems. Every quantity is computed deterministically from a
//! single 64-bit seed.
//!
//! Module map:
//!
//! - [`systems`]: phase spaces, the example maps, exact symbolic orbits.
//! - [`orbitstats`]: Birkhoff averages, empirical measures, the weak-*
//!   distance, statistical spectra and omega-limit proxies.
//! - [`ergopt`]: periodic-orbit maximization and orbits of maximal
//!   oscillation.
//! - [`decompose`]: transition graphs, terminal components, basins.
//! - [`growing`]: branch tracking, growing times, pre-balls, expansion
//!   diagnostics, local horseshoes.
//! - [`boweneye`]: heteroclinic sojourn recursion and its time fractions.
//! - [`harness`]: configuration, reports, exports, acceptance runner.

pub mod boweneye;
pub mod decompose;
pub mod ergopt;
mod error;
pub mod grid;
pub mod growing;
pub mod harness;
pub mod orbitstats;
pub mod seed;
pub mod systems;

pub use error::{Error, Result};
pub use grid::{CellSet, GridPartition};
pub use systems::{Family, Point, Space, System};
