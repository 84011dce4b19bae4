//! End-to-end acceptance checks over a fixed grid, shared between the CLI
//! selftest subcommand and the integration suite. Every tolerance, grid
//! point, and runtime budget is pinned here so both entry points agree on
//! what "passing" means.

use crate::beta::{beta_backward, beta_forward};
use crate::exact::{
    expected_bad_subsets, prob_all_exact, prob_none_exact, prob_none_float, prob_not_all_exact,
    prob_random_subset,
};
use crate::oracle::{count_bad_subsets, no_kgon_bruteforce};
use crate::rational::{ln_rational, rational_to_f64};
use crate::reconcile::{prob_none_verreault, reconcile_report};
use crate::sim::{
    all_kgon_event, break_stick, estimate_mean_bad_subsets, estimate_probability, no_kgon_event,
    Event,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Seed used by the acceptance runs unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 42;

/// Streams used by every simulation criterion.
pub const STREAMS: u32 = 4;

/// (k, n) pairs of the Monte Carlo validation grid.
pub const MC_GRID: &[(usize, usize)] = &[(3, 3), (3, 4), (3, 7), (4, 6), (5, 5), (4, 9)];

/// Trials per grid cell for the probability estimates.
pub const MC_TRIALS: u64 = 1_000_000;

/// Estimates must land within this many true standard errors of the exact
/// value. The standard error is taken at the exact probability, so the
/// acceptance window is not inflated or deflated by the estimate itself.
pub const MC_SIGMA: f64 = 4.0;

/// Trials for the mean failing-subset count at (3, 4).
pub const MEAN_TRIALS: u64 = 100_000;

/// (k, n) pairs and per-pair sample count for oracle equivalence.
pub const ORACLE_GRID: &[(usize, usize)] = &[(3, 5), (3, 8), (4, 8), (5, 10), (6, 12), (3, 12)];
pub const ORACLE_SAMPLES: u64 = 10_000;

/// Log-domain relative tolerance between the float and exact routes.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Large instance exercised by the stability criterion.
pub const LARGE_K: usize = 196;
pub const LARGE_N: usize = 200;

/// One acceptance criterion outcome.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

/// Render one pass/fail line, identically in the CLI and the test suite.
pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "[{}] criterion {} {} ({} ms): {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.millis,
        r.detail
    )
}

pub const CRITERIA: &[(usize, &str)] = &[
    (1, "diagonal-closed-form"),
    (2, "identity-suite"),
    (3, "triple-path-agreement"),
    (4, "random-subset-n-independence"),
    (5, "expected-count-closed-form"),
    (6, "monte-carlo-grid"),
    (7, "oracle-equivalence"),
    (8, "large-instance-stability"),
    (9, "determinism"),
];

/// Criteria that avoid simulation and finish in seconds.
pub const QUICK_IDS: &[usize] = &[1, 2, 3, 4, 5, 8];

/// Runs one criterion by id (1..=9).
pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .expect("criterion id in 1..=9");
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => diagonal_closed_form(),
        2 => identity_suite(),
        3 => triple_path_agreement(),
        4 => random_subset_n_independence(),
        5 => expected_count_closed_form(),
        6 => monte_carlo_grid(seed),
        7 => oracle_equivalence(seed),
        8 => large_instance_stability(),
        9 => determinism(seed),
        _ => unreachable!(),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs all criteria (or the quick exact-only subset) in order.
pub fn run_all(seed: u64, quick: bool) -> Vec<CriterionResult> {
    let ids: Vec<usize> = if quick {
        QUICK_IDS.to_vec()
    } else {
        (1..=9).collect()
    };
    ids.into_iter().map(|id| run_criterion(id, seed)).collect()
}

fn elapsed_ok(start: Instant, budget_ms: u128) -> (bool, u128) {
    let ms = start.elapsed().as_millis();
    (ms < budget_ms, ms)
}

/// 1: P(n,n) and the not-all probability both equal n/2^(n-1) for n <= 25,
/// in under a second.
fn diagonal_closed_form() -> (bool, String) {
    let start = Instant::now();
    for n in 3..=25usize {
        let closed = BigRational::new(BigInt::from(n), BigInt::from(1u8) << (n - 1));
        let p = prob_none_exact(n, n).expect("valid domain");
        let qbar = prob_not_all_exact(n, n).expect("valid domain");
        if p != closed || qbar != closed {
            return (false, format!("diagonal mismatch at n={n}"));
        }
    }
    let (in_time, ms) = elapsed_ok(start, 1_000);
    (
        in_time,
        format!("23 diagonal values match n/2^(n-1), {ms} ms (budget 1000)"),
    )
}

/// 2: complement identity and the none <= not-all ordering, all 3 <= k <= n
/// <= 30, in under ten seconds.
fn identity_suite() -> (bool, String) {
    let start = Instant::now();
    let mut pairs = 0;
    for n in 3..=30usize {
        for k in 3..=n {
            let q = prob_all_exact(k, n).expect("valid domain");
            let qbar = prob_not_all_exact(k, n).expect("valid domain");
            if !(q.clone() + qbar.clone()).is_one() {
                return (false, format!("all + not_all != 1 at k={k}, n={n}"));
            }
            let p = prob_none_exact(k, n).expect("valid domain");
            if p > qbar {
                return (false, format!("none > not_all at k={k}, n={n}"));
            }
            pairs += 1;
        }
    }
    let (in_time, ms) = elapsed_ok(start, 10_000);
    (
        in_time,
        format!("{pairs} pairs hold both identities, {ms} ms (budget 10000)"),
    )
}

/// 3: forward/backward beta equality, direct-vs-sequence probability
/// equality, and the full per-pair identity report, all 3 <= k <= n <= 50,
/// in under thirty seconds.
fn triple_path_agreement() -> (bool, String) {
    let start = Instant::now();
    let mut pairs = 0;
    for n in 3..=50usize {
        for k in 3..=n {
            if beta_forward(k, n).expect("valid") != beta_backward(k, n).expect("valid") {
                return (false, format!("beta routes disagree at k={k}, n={n}"));
            }
            if prob_none_exact(k, n).expect("valid") != prob_none_verreault(k, n).expect("valid") {
                return (
                    false,
                    format!("probability routes disagree at k={k}, n={n}"),
                );
            }
            let report = reconcile_report(k, n).expect("valid");
            if !report.all_hold() {
                return (
                    false,
                    format!(
                        "sequence identities fail at k={k}, n={n}: {}",
                        report.first_failure().unwrap_or("unknown")
                    ),
                );
            }
            pairs += 1;
        }
    }
    let (in_time, ms) = elapsed_ok(start, 30_000);
    (
        in_time,
        format!("{pairs} pairs agree along all three routes, {ms} ms (budget 30000)"),
    )
}

/// 4: the random-subset probability ignores n and equals k/2^(k-1), for
/// k in 3..=6 and n offsets {0, 3, 10, 50}, in under a second.
fn random_subset_n_independence() -> (bool, String) {
    let start = Instant::now();
    for k in 3..=6usize {
        let closed = BigRational::new(BigInt::from(k), BigInt::from(1u8) << (k - 1));
        for offset in [0usize, 3, 10, 50] {
            let p = prob_random_subset(k, k + offset).expect("valid domain");
            if p != closed {
                return (
                    false,
                    format!("value depends on n at k={k}, n={}", k + offset),
                );
            }
        }
    }
    let (in_time, ms) = elapsed_ok(start, 1_000);
    (
        in_time,
        format!("16 (k, n) combinations pin k/2^(k-1), {ms} ms (budget 1000)"),
    )
}

/// 5: the expected failing-subset count at three hand-checked points.
fn expected_count_closed_form() -> (bool, String) {
    let cases = [
        (3usize, 4usize, BigRational::from(BigInt::from(3))),
        (3, 3, BigRational::new(BigInt::from(3), BigInt::from(4))),
        (4, 6, BigRational::new(BigInt::from(15), BigInt::from(2))),
    ];
    for (k, n, expect) in cases {
        let got = expected_bad_subsets(k, n).expect("valid domain");
        if got != expect {
            return (false, format!("expected count wrong at k={k}, n={n}"));
        }
    }
    (true, "three closed-form expected counts match".to_string())
}

/// 6: every grid estimate lands within MC_SIGMA true standard errors of its
/// exact value, and the mean failing count at (3,4) lands within MC_SIGMA
/// reported standard errors of 3. Budget three minutes.
fn monte_carlo_grid(seed: u64) -> (bool, String) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for &(k, n) in MC_GRID {
        for event in [Event::None, Event::NotAll, Event::RandomSubset] {
            let exact = match event {
                Event::None => prob_none_exact(k, n),
                Event::NotAll => prob_not_all_exact(k, n),
                Event::RandomSubset => prob_random_subset(k, n),
            }
            .expect("valid domain");
            let p = rational_to_f64(&exact);
            let est =
                estimate_probability(event, k, n, MC_TRIALS, seed, STREAMS).expect("valid domain");
            let sigma = (p * (1.0 - p) / MC_TRIALS as f64).sqrt();
            let z = (est.p_hat - p).abs() / sigma;
            worst = worst.max(z);
            checks += 1;
            if z > MC_SIGMA {
                return (
                    false,
                    format!(
                        "{} at (k={k}, n={n}): p_hat={} vs exact={p}, z={z:.2}",
                        event.label(),
                        est.p_hat
                    ),
                );
            }
        }
    }
    let mean = estimate_mean_bad_subsets(3, 4, MEAN_TRIALS, seed, STREAMS).expect("valid domain");
    let z_mean = (mean.mean - 3.0).abs() / mean.std_err;
    checks += 1;
    if z_mean > MC_SIGMA {
        return (
            false,
            format!("mean failing count {} vs 3, z={z_mean:.2}", mean.mean),
        );
    }
    let (in_time, ms) = elapsed_ok(start, 180_000);
    (
        in_time,
        format!(
            "{checks} estimates within {MC_SIGMA} sigma (worst z={:.2}), {ms} ms (budget 180000)",
            worst.max(z_mean)
        ),
    )
}

/// 7: the O(n) event checks agree with brute-force enumeration on every
/// sampled stick, ORACLE_SAMPLES per grid pair, in under a minute.
fn oracle_equivalence(seed: u64) -> (bool, String) {
    let start = Instant::now();
    let mut samples = 0u64;
    for (pair_index, &(k, n)) in ORACLE_GRID.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1_000 + pair_index as u64);
        for _ in 0..ORACLE_SAMPLES {
            let sample = break_stick(n, &mut rng);
            let fast_none = no_kgon_event(&sample, k).expect("valid domain");
            let brute_none = no_kgon_bruteforce(&sample, k).expect("within budget");
            if fast_none != brute_none {
                return (
                    false,
                    format!("no-k-gon check disagrees with brute force at (k={k}, n={n})"),
                );
            }
            let fast_all = all_kgon_event(&sample, k).expect("valid domain");
            let brute_all = count_bad_subsets(&sample, k).expect("within budget") == 0;
            if fast_all != brute_all {
                return (
                    false,
                    format!("all-k-gon check disagrees with brute force at (k={k}, n={n})"),
                );
            }
            samples += 1;
        }
    }
    let (in_time, ms) = elapsed_ok(start, 60_000);
    (
        in_time,
        format!("{samples} samples agree with brute force, {ms} ms (budget 60000)"),
    )
}

/// 8: the float route at (196, 200) finishes in under 50 ms with a finite
/// log matching the exact route to 1e-9 relative, and the exact route
/// finishes in under two seconds.
fn large_instance_stability() -> (bool, String) {
    let t_float = Instant::now();
    let fp = prob_none_float(LARGE_K, LARGE_N).expect("valid domain");
    let float_ms = t_float.elapsed().as_millis();
    if float_ms >= 50 {
        return (false, format!("float route took {float_ms} ms (budget 50)"));
    }
    if !fp.log_prob.is_finite() {
        return (false, "float route log is not finite".to_string());
    }
    let t_exact = Instant::now();
    let exact = prob_none_exact(LARGE_K, LARGE_N).expect("valid domain");
    let exact_ms = t_exact.elapsed().as_millis();
    if exact_ms >= 2_000 {
        return (
            false,
            format!("exact route took {exact_ms} ms (budget 2000)"),
        );
    }
    let log_exact = ln_rational(&exact);
    let rel = ((fp.log_prob - log_exact) / log_exact).abs();
    if rel > FLOAT_REL_TOL {
        return (false, format!("log values differ by {rel:.3e} relative"));
    }
    (
        true,
        format!(
            "log p = {:.6} matches exact to {rel:.1e} relative; float {float_ms} ms, exact {exact_ms} ms",
            fp.log_prob
        ),
    )
}

/// 9: repeating an estimate with identical parameters reproduces it field
/// for field. Byte-level CLI output identity rides on top of this and is
/// asserted by the CLI's own tests.
fn determinism(seed: u64) -> (bool, String) {
    let a = estimate_probability(Event::None, 3, 4, 100_000, seed, STREAMS).expect("valid");
    let b = estimate_probability(Event::None, 3, 4, 100_000, seed, STREAMS).expect("valid");
    if a != b {
        return (false, "repeated estimate differs".to_string());
    }
    let c = estimate_mean_bad_subsets(3, 4, 10_000, seed, STREAMS).expect("valid");
    let d = estimate_mean_bad_subsets(3, 4, 10_000, seed, STREAMS).expect("valid");
    if c != d {
        return (false, "repeated mean estimate differs".to_string());
    }
    (
        true,
        format!(
            "estimates reproduce exactly (p_hat={}, mean={})",
            a.p_hat, c.mean
        ),
    )
}
