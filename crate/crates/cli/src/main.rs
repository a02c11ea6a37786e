use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use ergolab::harness::{self, ExperimentConfig, Kind, RunOutcome};
use ergolab::Error;

/// Run an ergolab experiment and write `report.json` plus CSV artifacts.
#[derive(Debug, Parser)]
#[command(name = "ergolab", version)]
struct Cli {
    /// orbit-stats, spectrum, optimize, decompose, growing, boweneye or
    /// acceptance.
    kind: Kind,

    /// Experiment configuration (TOML). Not used by `acceptance`.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory; defaults to the config's `output.dir`, then
    /// `ergolab-out/<kind>`.
    #[arg(long)]
    out: Option<PathBuf>,
}

const VERDICT_FAILURE: u8 = 1;
const USAGE_ERROR: u8 = 2;

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    if cli.kind == Kind::Acceptance {
        return Ok(ExperimentConfig::new(Kind::Acceptance));
    }
    let path = cli.config.as_deref().ok_or_else(|| Error::Config(format!("kind '{}' needs --config", cli.kind)))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if cfg.kind != cli.kind {
        return Err(Error::Config(format!("{} describes a '{}' experiment, not '{}'", path.display(), cfg.kind, cli.kind)));
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &ExperimentConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| Path::new("ergolab-out").join(cfg.kind.name()))
}

fn execute(cli: &Cli) -> Result<(RunOutcome, PathBuf), Error> {
    let cfg = load(cli)?;
    let outcome = harness::run(&cfg)?;
    let dir = out_dir(cli, &cfg);
    outcome.write(&dir)?;
    Ok((outcome, dir))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((outcome, dir)) => {
            for v in &outcome.report.verdicts {
                println!("{}", v.line());
            }
            println!("wrote {}", dir.join("report.json").display());
            match outcome.report.passed() {
                Some(false) => ExitCode::from(VERDICT_FAILURE),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("ergolab: {e}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
