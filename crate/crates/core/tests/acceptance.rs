//! Runs every named verification sweep and prints one line per criterion.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use bninf::suites::{run_suite, SUITES};
use bninf::Execution;

const SEED: u64 = 2024;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (i, name) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let report = run_suite(name, SEED, Execution::default()).expect("known suite");
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name}: {} checks, {} failures ({:.1}s)",
            i + 1,
            report.cases,
            report.failures.len(),
            start.elapsed().as_secs_f64()
        );
        for note in &report.notes {
            println!("    {note}");
        }
        for f in report.failures.iter().take(5) {
            println!("    failure: {f}");
        }
        if !report.passed() {
            failed.push(*name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", SUITES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        ExitCode::FAILURE
    }
}
