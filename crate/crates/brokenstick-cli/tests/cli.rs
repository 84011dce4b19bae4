//! Black-box tests of the installed binary: output contracts, exit codes,
//! seeding behavior, and schema conformance of the json records.

use serde_json::Value;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_brokenstick"));
    // keep the ambient environment from leaking into seed defaults
    cmd.env_remove("BROKENSTICK_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).expect("one json record")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exact_json_matches_frozen_values() {
    let out = run(&[
        "exact",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["problem"], "none");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["num"], "3");
    assert_eq!(v["den"], "7");
    assert_eq!(v["decimal"], "0.428571428571429");

    let out = run(&[
        "exact",
        "--problem",
        "not_all",
        "-k",
        "5",
        "-n",
        "8",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["num"], "790148");
    assert_eq!(v["den"], "911625");

    let out = run(&[
        "exact",
        "--problem",
        "all",
        "-k",
        "4",
        "-n",
        "9",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["num"], "15415");
    assert_eq!(v["den"], "2263261");

    let out = run(&[
        "exact",
        "--problem",
        "random_subset",
        "-k",
        "4",
        "-n",
        "9",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["num"], "1");
    assert_eq!(v["den"], "2");
}

#[test]
fn exact_plain_and_csv_shapes() {
    let out = run(&["exact", "--problem", "none", "-k", "3", "-n", "4"]);
    assert!(stdout(&out).contains("3/7"));

    let out = run(&[
        "exact",
        "--problem",
        "none",
        "-k",
        "5",
        "-n",
        "5",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("problem,k,n,num,den,decimal"));
    assert_eq!(lines.next(), Some("none,5,5,5,16,0.3125"));
    assert_eq!(lines.next(), None);
}

#[test]
fn exact_both_mode_reports_a_tiny_rel_diff() {
    let out = run(&[
        "exact",
        "--problem",
        "none",
        "-k",
        "4",
        "-n",
        "9",
        "--mode",
        "both",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["num"], "9");
    assert_eq!(v["den"], "416000");
    let rel = v["rel_diff"].as_f64().expect("rel_diff present");
    assert!(rel < 1e-9, "rel_diff {rel}");
    assert!(v["float"].as_f64().unwrap() > 0.0);
    assert!(v["log_prob"].as_f64().unwrap() < 0.0);
}

#[test]
fn float_mode_handles_underflow_via_log() {
    let out = run(&[
        "exact",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "300",
        "--mode",
        "float",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["float"].as_f64().unwrap(), 0.0);
    assert!(v["log_prob"].as_f64().unwrap() < -20_000.0);
    assert!(v.get("num").is_none());
}

#[test]
fn usage_and_domain_errors_exit_2() {
    for args in [
        &[
            "exact",
            "--problem",
            "not_all",
            "-k",
            "4",
            "-n",
            "6",
            "--mode",
            "float",
        ][..],
        &[
            "exact",
            "--problem",
            "expected_bad",
            "-k",
            "3",
            "-n",
            "5",
            "--mode",
            "both",
        ],
        &[
            "exact",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--mode",
            "both",
            "--format",
            "csv",
        ],
        &["exact", "--problem", "none", "-k", "2", "-n", "5"],
        &["exact", "--problem", "none", "-k", "6", "-n", "5"],
        &[
            "simulate",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--format",
            "csv",
        ],
        &[
            "simulate",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--streams",
            "0",
        ],
        &[
            "simulate",
            "--problem",
            "expected_bad",
            "-k",
            "3",
            "-n",
            "4",
            "--generator",
            "exponential",
        ],
        &[
            "table", "--k-min", "4", "--k-max", "3", "--n-min", "3", "--n-max", "5",
        ],
        &[
            "table", "--k-min", "2", "--k-max", "3", "--n-min", "3", "--n-max", "5",
        ],
        &["selftest", "--criterion", "12"],
        &["no-such-subcommand"],
        &[
            "exact",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--no-such-flag",
        ],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "args {args:?} gave {}", stderr(&out));
    }
}

#[test]
fn table_contract_holds() {
    let out = run(&[
        "table",
        "--problems",
        "none,expected_bad",
        "--k-min",
        "3",
        "--k-max",
        "5",
        "--n-min",
        "3",
        "--n-max",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "problem,k,n,num,den,decimal");
    assert!(lines.contains(&"none,5,5,5,16,0.3125"));
    assert!(lines.contains(&"expected_bad,4,6,15,2,7.5"));
    // problems iterate outermost, and no row may violate k <= n
    assert!(lines[1].starts_with("none,"));
    let first_expected_bad = lines.iter().position(|l| l.starts_with("expected_bad,"));
    let last_none = lines.iter().rposition(|l| l.starts_with("none,"));
    assert!(first_expected_bad.unwrap() > last_none.unwrap());
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        let k: usize = cols[1].parse().unwrap();
        let n: usize = cols[2].parse().unwrap();
        assert!((3..=5).contains(&k) && k <= n && n <= 6);
    }
}

#[test]
fn table_decimals_round_trip_against_the_fractions() {
    let out = run(&[
        "table", "--k-min", "3", "--k-max", "6", "--n-min", "3", "--n-max", "12",
    ]);
    let text = stdout(&out);
    for row in text.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        let num: f64 = cols[3].parse().unwrap();
        let den: f64 = cols[4].parse().unwrap();
        let decimal: f64 = cols[5].parse().unwrap();
        let target = num / den;
        assert!(
            (decimal - target).abs() <= 5e-15 * target.max(1.0),
            "row {row}"
        );
    }
}

#[test]
fn decimal_fields_round_trip_exactly_through_the_renderer() {
    // rebuilding the rational from num/den and re-rendering must give back
    // the decimal string byte for byte
    for (problem, k, n) in [
        ("none", "3", "4"),
        ("none", "4", "9"),
        ("not_all", "5", "8"),
        ("all", "4", "9"),
        ("expected_bad", "4", "6"),
        ("none", "196", "200"),
    ] {
        let v = json(&run(&[
            "exact",
            "--problem",
            problem,
            "-k",
            k,
            "-n",
            n,
            "--format",
            "json",
        ]));
        let num: num_bigint::BigInt = v["num"].as_str().unwrap().parse().unwrap();
        let den: num_bigint::BigInt = v["den"].as_str().unwrap().parse().unwrap();
        let rebuilt = brokenstick::BigRational::new(num, den);
        assert_eq!(
            brokenstick::rational::decimal_string(&rebuilt),
            v["decimal"].as_str().unwrap(),
            "for {problem} k={k} n={n}"
        );
    }
}

#[test]
fn simulate_output_is_byte_identical_across_runs() {
    let args = [
        "simulate",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "5",
        "--trials",
        "30000",
        "--seed",
        "7",
        "--streams",
        "3",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let mut other = args;
    other[10] = "8"; // different seed
    let c = run(&other);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_comes_from_flag_then_env_then_default() {
    let args = [
        "simulate",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "4",
        "--trials",
        "1000",
        "--format",
        "json",
    ];
    let v = json(&run(&args));
    assert_eq!(v["estimate"]["seed"], 42);

    let out = bin()
        .args(args)
        .env("BROKENSTICK_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json(&out)["estimate"]["seed"], 123);

    let out = bin()
        .args(args)
        .args(["--seed", "9"])
        .env("BROKENSTICK_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json(&out)["estimate"]["seed"], 9);
}

#[test]
fn simulate_all_mirrors_not_all_on_the_same_trials() {
    let shared = [
        "-k", "4", "-n", "6", "--trials", "20000", "--seed", "11", "--format", "json",
    ];
    let all = json(&run(
        &[&["simulate", "--problem", "all"][..], &shared[..]].concat()
    ));
    let not_all = json(&run(&[
        &["simulate", "--problem", "not_all"][..],
        &shared[..],
    ]
    .concat()));
    let (a, q) = (&all["estimate"], &not_all["estimate"]);
    assert_eq!(a["event_name"], "all");
    assert_eq!(
        a["successes"].as_u64().unwrap() + q["successes"].as_u64().unwrap(),
        20000
    );
    assert_eq!(
        a["p_hat"].as_f64().unwrap(),
        1.0 - q["p_hat"].as_f64().unwrap()
    );
    assert!(a["ci_high"].as_f64().unwrap() <= 1.0 - q["ci_low"].as_f64().unwrap() + 1e-12);
}

#[test]
fn simulate_z_scores_are_sane_and_gated_on_n() {
    let v = json(&run(&[
        "simulate",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "4",
        "--trials",
        "20000",
        "--format",
        "json",
    ]));
    let z = v["z_score"].as_f64().expect("z_score for small n");
    assert!(z.abs() < 5.0, "z {z}");

    let v = json(&run(&[
        "simulate",
        "--problem",
        "none",
        "-k",
        "3",
        "-n",
        "1500",
        "--trials",
        "500",
        "--format",
        "json",
    ]));
    assert!(v.get("z_score").is_none(), "no exact side above the gate");
}

#[test]
fn exponential_generator_is_accepted_and_deterministic() {
    let args = [
        "simulate",
        "--problem",
        "not_all",
        "-k",
        "4",
        "-n",
        "7",
        "--trials",
        "10000",
        "--generator",
        "exponential",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn closing_the_output_pipe_ends_the_process_quietly() {
    use std::process::Stdio;
    // enough rows that the write outlives the pipe buffer once the reader
    // is gone; the process must neither panic nor report an error
    let mut child = bin()
        .args([
            "table", "--k-min", "3", "--k-max", "3", "--n-min", "3", "--n-max", "300",
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawns");
    drop(child.stdout.take());
    let status = child.wait().expect("waits");
    assert_eq!(status.code(), Some(0));
    let mut err = String::new();
    use std::io::Read;
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut err)
        .unwrap();
    assert!(err.is_empty(), "stderr: {err}");
}

#[test]
fn reconcile_reports_and_exit_codes() {
    let out = run(&["reconcile", "-k", "5", "-n", "8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all hold"));

    let out = run(&["reconcile", "-k", "5", "-n", "8", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["k"], 5);
    assert!(v["checks"].as_u64().unwrap() > 0);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let out = run(&["reconcile", "-k", "5", "-n", "8", "--corrupt-xi", "6"]);
    assert_eq!(code(&out), 1);
    assert!(
        stdout(&out).contains("xi(6)"),
        "violation names the corrupted entry: {}",
        stdout(&out)
    );

    let out = run(&["reconcile", "-k", "5", "-n", "8", "--corrupt-xi", "9"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_quick_passes_with_one_line_per_criterion() {
    let out = run(&["selftest", "--quick"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7, "6 criteria plus the summary: {text}");
    for line in &lines[..6] {
        assert!(line.starts_with("[PASS] criterion "), "line {line}");
    }
    assert_eq!(lines[6], "selftest: 6/6 criteria passed");
}

#[test]
fn json_outputs_conform_to_the_shipped_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/result_record.schema.json"))
        .expect("schema parses");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");

    let records = [
        run(&[
            "exact",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--format",
            "json",
        ]),
        run(&[
            "exact",
            "--problem",
            "expected_bad",
            "-k",
            "4",
            "-n",
            "6",
            "--format",
            "json",
        ]),
        run(&[
            "exact",
            "--problem",
            "none",
            "-k",
            "196",
            "-n",
            "200",
            "--mode",
            "float",
            "--format",
            "json",
        ]),
        run(&[
            "exact",
            "--problem",
            "random_subset",
            "-k",
            "5",
            "-n",
            "9",
            "--mode",
            "both",
            "--format",
            "json",
        ]),
        run(&[
            "simulate",
            "--problem",
            "none",
            "-k",
            "3",
            "-n",
            "4",
            "--trials",
            "2000",
            "--format",
            "json",
        ]),
        run(&[
            "simulate",
            "--problem",
            "all",
            "-k",
            "4",
            "-n",
            "6",
            "--trials",
            "2000",
            "--format",
            "json",
        ]),
        run(&[
            "simulate",
            "--problem",
            "expected_bad",
            "-k",
            "3",
            "-n",
            "5",
            "--trials",
            "2000",
            "--format",
            "json",
        ]),
    ];
    for out in &records {
        assert_eq!(code(out), 0);
        let instance = json(out);
        let errors: Vec<String> = validator
            .iter_errors(&instance)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{instance}: {errors:?}");
    }

    // a record the schema must reject
    let bad: Value = serde_json::json!({"problem": "none", "k": 3, "n": 4});
    assert!(!validator.is_valid(&bad), "mode is required");
}
