//! The full acceptance gate. All nine criteria run serially in one test so
//! the pinned wall-clock budgets are not distorted by harness parallelism;
//! one pass/fail line prints per criterion (visible with --nocapture).
//! Criterion 9 additionally checks determinism at the binary boundary:
//! two identical invocations must produce byte-identical output.

use brokenstick::selftest::{self, DEFAULT_SEED};
use std::process::Command;

fn cli_stdout(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_brokenstick"))
        .args(args)
        .env_remove("BROKENSTICK_SEED")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "cli failed: {args:?}");
    out.stdout
}

#[test]
fn acceptance_criteria() {
    let mut failures = Vec::new();
    for id in 1..=9 {
        let mut r = selftest::run_criterion(id, DEFAULT_SEED);
        if id == 9 && r.passed {
            let args = [
                "simulate",
                "--problem",
                "none",
                "-k",
                "3",
                "-n",
                "7",
                "--trials",
                "100000",
                "--seed",
                "42",
                "--format",
                "json",
            ];
            if cli_stdout(&args) == cli_stdout(&args) {
                r.detail.push_str("; cli output byte-identical");
            } else {
                r.passed = false;
                r.detail = "cli output differs between identical invocations".to_string();
            }
        }
        println!("{}", selftest::format_line(&r));
        if !r.passed {
            failures.push(format!("criterion {} {}: {}", r.id, r.name, r.detail));
        }
    }
    assert!(
        failures.is_empty(),
        "failed criteria:\n{}",
        failures.join("\n")
    );
}
