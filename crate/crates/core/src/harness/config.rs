//! Experiment configuration files (TOML), one experiment per file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boweneye::SaddleParams;
use crate::orbitstats::{Observable, Schedule, DEFAULT_CLUSTER_RADIUS, DEFAULT_TRUNCATION};
use crate::seed::{self, Domain};
use crate::systems::{Point, Space, System, Word};
use crate::{Error, Family, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    OrbitStats,
    Spectrum,
    Optimize,
    Decompose,
    Growing,
    Boweneye,
    Acceptance,
}

impl Kind {
    pub const ALL: [Kind; 7] =
        [Kind::OrbitStats, Kind::Spectrum, Kind::Optimize, Kind::Decompose, Kind::Growing, Kind::Boweneye, Kind::Acceptance];

    pub fn name(self) -> &'static str {
        match self {
            Kind::OrbitStats => "orbit-stats",
            Kind::Spectrum => "spectrum",
            Kind::Optimize => "optimize",
            Kind::Decompose => "decompose",
            Kind::Growing => "growing",
            Kind::Boweneye => "boweneye",
            Kind::Acceptance => "acceptance",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment kind '{s}'")))
    }
}

/// Initial point: explicit coordinates, or drawn from the seed when `x` is
/// absent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    /// Index of the seeded draw, so several points can share one seed.
    #[serde(default)]
    pub index: u64,
}

impl Initial {
    pub fn point(&self, space: Space, seed: u64) -> Point {
        match self.x {
            Some(x) => Point::xy(x, self.y.unwrap_or(0.0)),
            None => {
                let mut rng = seed::stream(seed, Domain::InitialPoint, self.index);
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                if space.dimension() == 1 {
                    Point::new(x)
                } else {
                    Point::xy(x, y)
                }
            }
        }
    }
}

fn default_n() -> u64 {
    100_000
}
fn default_m() -> usize {
    64
}
fn default_period() -> u32 {
    12
}
fn default_growing() -> u64 {
    10_000
}
fn default_padding() -> usize {
    crate::decompose::DEFAULT_PADDING
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    /// Orbit length.
    #[serde(default = "default_n")]
    pub n: u64,
    /// Grid resolution per axis.
    #[serde(default = "default_m")]
    pub m: usize,
    /// Maximal period for periodic-orbit scans.
    #[serde(default = "default_period")]
    pub period: u32,
    /// Iterates scanned for growing times (each one stores its record).
    #[serde(default = "default_growing")]
    pub growing: u64,
    #[serde(default)]
    pub burn_in: u64,
    /// Samples per cell for transition graphs; defaults to corners,
    /// center and as many jittered points as corners.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default = "default_padding")]
    pub padding: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            n: default_n(),
            m: default_m(),
            period: default_period(),
            growing: default_growing(),
            burn_in: 0,
            samples: None,
            padding: default_padding(),
        }
    }
}

/// Documented per-kind ceilings.
pub mod ceilings {
    pub const ORBIT_LENGTH: u64 = 100_000_000;
    pub const GRID_1D: usize = 1 << 16;
    pub const GRID_2D: usize = 512;
    pub const GRAPH_CELLS: usize = 1 << 18;
    pub const GROWING_LENGTH: u64 = 10_000_000;
    pub const PASSES: usize = 1_000_000;
    pub const TOTAL_BITS: u64 = 1 << 32;
}

fn default_observable() -> Observable {
    Observable::cos(1)
}
fn default_radius() -> f64 {
    DEFAULT_CLUSTER_RADIUS
}
fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}
fn default_mass_floor() -> f64 {
    1e-6
}
fn default_tail_fraction() -> f64 {
    0.5
}
fn default_delta() -> f64 {
    crate::growing::DEFAULT_DELTA
}
fn default_sigma() -> f64 {
    crate::growing::DEFAULT_SIGMA
}
fn default_delta_t() -> f64 {
    1e-3
}
fn default_growth() -> f64 {
    crate::ergopt::DEFAULT_GROWTH
}
fn default_fat_block() -> usize {
    crate::decompose::DEFAULT_FAT_BLOCK
}

/// `[lo, hi)` per axis; on a periodic axis `lo > hi` wraps through 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorseshoeSpec {
    pub p: f64,
    pub eps: f64,
    pub n_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySpec {
    pub n_max: usize,
    /// Ball radius; one cell width when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

/// Operation parameters; each kind reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "default_observable")]
    pub observable: Observable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(default = "default_radius")]
    pub cluster_radius: f64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default = "default_mass_floor")]
    pub mass_floor: f64,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_delta_t")]
    pub delta_t: f64,
    /// Itineraries of target periodic orbits for an oscillating orbit.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<Word>,
    #[serde(default = "default_growth")]
    pub growth: f64,
    /// Length of the oscillating program; `n + 64` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_bits: Option<u64>,
    #[serde(default = "default_fat_block")]
    pub fat_block: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensitivity: Option<SensitivitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horseshoe: Option<HorseshoeSpec>,
}

impl Default for Params {
    fn default() -> Self {
        toml::from_str("").expect("all parameters have defaults")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Directory for `report.json` and CSV artifacts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<Family>,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saddle: Option<SaddleParams>,
    #[serde(default)]
    pub output: Output,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        ExperimentConfig {
            kind,
            seed: 0,
            name: None,
            system: None,
            initial: Initial::default(),
            budget: Budget::default(),
            schedule: Schedule::default(),
            params: Params::default(),
            saddle: None,
            output: Output::default(),
        }
    }

    pub fn with_system(mut self, family: Family) -> Self {
        self.system = Some(family);
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    /// The system, validated.
    pub fn system(&self) -> Result<System> {
        let family = self
            .system
            .clone()
            .ok_or_else(|| Error::config(format!("kind '{}' needs a [system] section", self.kind)))?;
        System::new(family)
    }

    /// Symbolic systems carry their own initial point; otherwise the
    /// `[initial]` section decides.
    pub fn initial_point(&self) -> Result<Point> {
        let system = self.system()?;
        Ok(system.initial_point().unwrap_or_else(|| self.initial.point(system.space(), self.seed)))
    }

    /// Checks field ranges and the per-kind budget ceilings.
    pub fn validate(&self) -> Result<()> {
        use ceilings::*;
        self.schedule.validate()?;
        let b = &self.budget;
        let needs_system = !matches!(self.kind, Kind::Boweneye | Kind::Acceptance);
        if needs_system {
            let system = self.system()?;
            let grid_cap = if system.dimension() == 1 { GRID_1D } else { GRID_2D };
            if b.m > grid_cap {
                return Err(Error::budget(format!("grid resolution {} exceeds the ceiling {grid_cap}", b.m)));
            }
            if let Some(x) = self.initial.x {
                let p = Point::xy(x, self.initial.y.unwrap_or(0.0));
                if !system.space().contains(p) {
                    return Err(Error::config(format!("initial point {x} is outside the phase space")));
                }
            }
        }
        match self.kind {
            Kind::OrbitStats | Kind::Spectrum | Kind::Optimize => {
                if b.n > ORBIT_LENGTH {
                    return Err(Error::budget(format!("orbit length {} exceeds the ceiling {ORBIT_LENGTH}", b.n)));
                }
                if b.n < 2 {
                    return Err(Error::budget("orbit length must be at least 2"));
                }
            }
            Kind::Decompose => {
                let cells = if self.system()?.dimension() == 1 { b.m } else { b.m * b.m };
                if cells > GRAPH_CELLS {
                    return Err(Error::budget(format!("{cells} cells exceed the graph ceiling {GRAPH_CELLS}")));
                }
            }
            Kind::Growing => {
                let longest = b.n.max(b.growing);
                if longest > GROWING_LENGTH {
                    return Err(Error::budget(format!("growing budget {longest} exceeds the ceiling {GROWING_LENGTH}")));
                }
            }
            Kind::Boweneye => {
                let saddle = self.saddle.ok_or_else(|| Error::config("kind 'boweneye' needs a [saddle] section"))?;
                saddle.validate()?;
                if self.saddle.map_or(0, |s| s.passes) > PASSES {
                    return Err(Error::budget(format!("pass count exceeds the ceiling {PASSES}")));
                }
            }
            Kind::Acceptance => {}
        }
        if self.params.total_bits.unwrap_or(0) > TOTAL_BITS {
            return Err(Error::budget(format!("program length exceeds the ceiling {TOTAL_BITS}")));
        }
        Ok(())
    }
}
