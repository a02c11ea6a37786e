//! Runs the acceptance suite and prints one PASS/FAIL line per criterion.
//!
//! Red criteria are reported, not fatal: the target fails only when a
//! criterion cannot run or the report is malformed.

use std::process::ExitCode;

use ergolab::harness::acceptance_suite;

fn main() -> ExitCode {
    let outcome = match acceptance_suite() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("acceptance suite did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let report = &outcome.report;
    for v in &report.verdicts {
        println!("{}", v.line());
    }
    let passed = report.verdicts.iter().filter(|v| v.passed).count();
    println!("acceptance: {passed}/{} criteria pass", report.verdicts.len());

    let ids: Vec<u32> = report.verdicts.iter().map(|v| v.id).collect();
    let errored: Vec<u32> = report.verdicts.iter().filter(|v| v.detail.starts_with("error:")).map(|v| v.id).collect();
    let well_formed = ids == (1..=9).collect::<Vec<_>>()
        && report.to_json().is_ok()
        && outcome.artifacts.first().is_some_and(|a| a.contents.lines().count() == 9);
    if !errored.is_empty() || !well_formed {
        eprintln!("criteria raised errors: {errored:?}; well formed: {well_formed}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
