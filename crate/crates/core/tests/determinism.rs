//! Identical configs give byte-identical reports, whatever the thread
//! count.

use ergolab::harness::{acceptance::fixture, run, ExperimentConfig};

fn digest(cfg: &ExperimentConfig) -> String {
    run(cfg).unwrap().report.digest().unwrap()
}

#[test]
fn repeated_runs_hash_identically() {
    for name in ["doubling_graph", "skew_tent_graph", "bowen_eye", "growing_doubling"] {
        let cfg = fixture(name).unwrap();
        assert_eq!(digest(&cfg), digest(&cfg), "{name}");
    }
}

#[test]
fn thread_count_does_not_change_reports() {
    let cfg = fixture("logistic_graph").unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| digest(&cfg));
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| digest(&cfg));
    assert_eq!(single, many);
}

#[test]
fn the_seed_changes_seeded_runs() {
    let text = "kind = \"orbit-stats\"\n[system]\nfamily = \"tent\"\n[budget]\nn = 500\n";
    let a = ExperimentConfig::parse(text).unwrap();
    let mut b = a.clone();
    b.seed = 1;
    assert_ne!(digest(&a), digest(&b));
    assert_eq!(digest(&a), digest(&a.clone()));
}

#[test]
fn config_text_round_trips() {
    for text in [
        include_str!("../../../configs/orbit_stats.toml"),
        include_str!("../../../configs/spectrum.toml"),
        include_str!("../../../configs/optimize.toml"),
        include_str!("../../../configs/decompose.toml"),
        include_str!("../../../configs/growing.toml"),
        include_str!("../../../configs/boweneye.toml"),
    ] {
        let cfg = ExperimentConfig::parse(text).unwrap();
        let once = cfg.to_toml().unwrap();
        let twice = ExperimentConfig::parse(&once).unwrap().to_toml().unwrap();
        assert_eq!(once, twice);
    }
}
