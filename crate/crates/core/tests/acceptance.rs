//! Runs suites A1–A10 and prints one line per suite; exits nonzero if any
//! fails or a deliberately broken meet slips through.

use std::process::ExitCode;

use hforest::suites::{broken_meet, run, run_all, SuiteConfig, ALL};

fn main() -> ExitCode {
    // answer test discovery without running the suites
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let results = run_all(&ALL, &SuiteConfig::default());
    for r in &results {
        println!("{}", r.line());
    }
    let mut ok = results.len() == ALL.len() && results.iter().all(|r| r.passed);

    let cfg = SuiteConfig {
        meet: broken_meet,
        ..SuiteConfig::default()
    };
    let caught = run("A3", &cfg).is_some_and(|r| !r.passed);
    println!(
        "{} fault injection: a meet missing a component fails A3",
        if caught { "PASS" } else { "FAIL" }
    );
    ok &= caught;

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
