use std::path::Path;
use std::process::Command;

fn ergolab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ergolab"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const BOWEN: &str = "kind = \"boweneye\"\n[saddle]\nalpha_minus = -2.0\nalpha_plus = 1.0\nbeta_minus = -2.0\nbeta_plus = 1.0\npasses = 200\n";

#[test]
fn boweneye_run_writes_report_and_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "eye.toml", BOWEN);
    let out = tmp.path().join("out");
    let status = ergolab().args(["boweneye", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let limsup = report["results"]["limsup"].as_f64().unwrap();
    let liminf = report["results"]["liminf"].as_f64().unwrap();
    assert!((limsup - 2.0 / 3.0).abs() < 1e-3 && (liminf - 1.0 / 3.0).abs() < 1e-3);
    assert_eq!(report["tool"], "ergolab");
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 201);
}

#[test]
fn decompose_doubling_reports_one_attractor() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "d.toml", "kind = \"decompose\"\n[system]\nfamily = \"doubling\"\n[budget]\nm = 64\n");
    let out = tmp.path().join("out");
    let status = ergolab().args(["decompose", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["results"]["ell"], 1);
    assert!(out.join("edges.csv").exists() && out.join("raster.csv").exists());
}

#[test]
fn seed_override_is_echoed() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "kind = \"orbit-stats\"\n[system]\nfamily = \"tent\"\n[budget]\nn = 1000\n";
    let cfg = write(tmp.path(), "o.toml", text);
    let out = tmp.path().join("out");
    let status =
        ergolab().args(["orbit-stats", "--seed", "17", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 17);
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(ergolab().arg("no-such-kind").status().unwrap().code(), Some(2));
    assert_eq!(ergolab().arg("decompose").status().unwrap().code(), Some(2));

    let bad = write(tmp.path(), "bad.toml", "kind = \"decompose\"\nunknown = 3\n");
    let output = ergolab().args(["decompose", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown") && stderr.contains("line"), "{stderr}");

    let huge = write(tmp.path(), "huge.toml", "kind = \"decompose\"\n[system]\nfamily = \"tent\"\n[budget]\nm = 10000000\n");
    let output = ergolab().args(["decompose", "--config"]).arg(&huge).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("ceiling"));

    let eye = write(tmp.path(), "eye.toml", BOWEN);
    assert_eq!(ergolab().args(["decompose", "--config"]).arg(&eye).status().unwrap().code(), Some(2));
}
