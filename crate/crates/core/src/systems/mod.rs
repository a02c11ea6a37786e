//! Phase spaces and the zoo of example maps.
//!
//! Every family is validated at construction, after which evaluation is
//! total and pure. One-dimensional families additionally expose their
//! monotone branch structure (see [`Branches`]) for growing-time analysis.

mod branches;
mod family;
mod orbit;
mod phi;
mod program;
mod space;

pub use branches::Branches;
pub use family::{Family, System, CRITICAL_EPS};
pub use orbit::{Orbit, OrbitIter, Truncation};
pub use phi::{PhiTable, DEFAULT_KNOTS};
pub use program::{bits_to_point, BitSource, BitStream, Block, BlockProgram, Repetition, Word, DEFAULT_PRECISION};
pub use space::{wrap_unit, Point, Space};
