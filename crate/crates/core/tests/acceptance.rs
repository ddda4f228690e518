//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails
//! when a gated criterion fails. Positional arguments select criteria by
//! number; `JBALL_VERBOSE` lists every individual check.

use std::process::ExitCode;

use jball_core::suite::run_criterion;

fn main() -> ExitCode {
    // cargo passes libtest flags such as --nocapture; only numbers select.
    let mut ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if ids.is_empty() {
        ids = (1..=13).collect();
    }
    let verbose = std::env::var_os("JBALL_VERBOSE").is_some();
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id);
        println!("{r}");
        for line in r.checks.iter().filter(|l| verbose || !l.ok) {
            println!("    [{}] {}", if line.ok { "ok" } else { "x" }, line.label);
        }
        if r.gated && !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all gated criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
