//! Runs the full verification suite and prints one PASS/FAIL line per
//! criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use nanotube_spectra::verify::{run_criterion, Suite};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let report = run_criterion(id, Suite::Full);
        println!("{report}");
        if !report.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
