//! Experiment plumbing: TOML configs, per-kind runners, JSON reports with
//! CSV artifacts, and the acceptance suite.

pub mod acceptance;
mod config;
mod report;
pub mod run;

pub use acceptance::{acceptance_suite, run_criteria};
pub use config::{
    ceilings, Budget, ExperimentConfig, HorseshoeSpec, Initial, Kind, Output, Params, RegionSpec, SensitivitySpec,
};
pub use report::{Artifact, RunOutcome, RunReport, Verdict};
pub use run::run;
