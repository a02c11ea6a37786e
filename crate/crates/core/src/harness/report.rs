use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{ExperimentConfig, Kind};
use crate::Result;

/// One acceptance criterion's outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_seconds: f64,
    pub limit_seconds: Option<f64>,
}

impl Verdict {
    /// `PASS [n] name: detail (t s / limit s)`.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let limit = self.limit_seconds.map_or(String::new(), |l| format!(" / {l} s"));
        format!("{status} [{}] {}: {} ({:.2} s{limit})", self.id, self.name, self.detail, self.elapsed_seconds)
    }
}

/// A named output file.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: String) -> Self {
        Artifact { name: name.into(), contents }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub kind: Kind,
    pub config: ExperimentConfig,
    pub results: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig, results: serde_json::Value) -> Self {
        RunReport {
            tool: "ergolab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            kind: config.kind,
            config: config.clone(),
            results,
            verdicts: Vec::new(),
            wall_time_seconds: 0.0,
        }
    }

    /// `None` unless verdicts are present.
    pub fn passed(&self) -> Option<bool> {
        (!self.verdicts.is_empty()).then(|| self.verdicts.iter().all(|v| v.passed))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with timings zeroed: identical for identical configs.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.wall_time_seconds = 0.0;
        for v in &mut copy.verdicts {
            v.elapsed_seconds = 0.0;
        }
        Ok(serde_json::to_string(&copy)?)
    }

    /// SHA-256 of [`Self::deterministic_json`], hex encoded.
    pub fn digest(&self) -> Result<String> {
        let hash = Sha256::digest(self.deterministic_json()?.as_bytes());
        Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// Report plus artifacts of one run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
}

impl RunOutcome {
    /// Writes `report.json` and every artifact into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.report.to_json()?)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.contents)?;
        }
        Ok(())
    }
}
