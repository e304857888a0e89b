//! Runs the eight acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use qu0_core::selfcheck::{run_criterion, SelfcheckConfig, CRITERIA};

fn main() -> ExitCode {
    let config = SelfcheckConfig::default();
    let mut failed = 0;
    println!("\nacceptance criteria");
    for (id, _) in CRITERIA {
        let r = run_criterion(id, &config);
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{}] {} ({:.1}s): {}",
            r.id,
            r.name,
            r.elapsed.as_secs_f64(),
            r.detail
        );
        failed += usize::from(!r.passed);
    }
    println!(
        "{} of {} criteria passed\n",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
