//! Command line front end. Subcommands map one-to-one onto the library:
//! exact and table evaluate the closed forms, simulate runs the Monte
//! Carlo estimators, reconcile sweeps the sequence identities, selftest
//! runs the pinned acceptance criteria.
//!
//! Exit codes: 0 on success, 1 when a check ran and failed (reconcile
//! violations, selftest failures), 2 for usage or domain errors.

mod output;

use brokenstick::rational::ln_rational;
use brokenstick::selftest;
use brokenstick::sim::Generator;
use brokenstick::{
    beta_backward, build_sequences, estimate_mean_bad_subsets, estimate_probability_with_generator,
    expected_bad_subsets, prob_all_exact, prob_none_exact, prob_none_float, prob_not_all_exact,
    prob_random_subset, verify_sequences, wilson_interval, BigRational, Event, FloatProb,
    ReconcileReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{csv_row, json_line, plain_line, ResultRecord, CSV_HEADER};
use std::process::ExitCode;

/// Exact values are only computed alongside a simulation (for the z-score)
/// up to this n; beyond it the estimate is reported on its own.
const Z_SCORE_MAX_N: usize = 1000;

#[derive(Parser)]
#[command(
    name = "brokenstick",
    version,
    about = "Broken-stick k-gon probabilities, exact and simulated"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact probability or expected count for one (k, n) instance
    Exact(ExactArgs),
    /// CSV table of exact values over ranges of k and n
    Table(TableArgs),
    /// Monte Carlo estimate for one (k, n) instance
    Simulate(SimulateArgs),
    /// Cross-check the sequence system against the beta recursion
    Reconcile(ReconcileArgs),
    /// Run the pinned acceptance criteria
    Selftest(SelftestArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Problem {
    /// P(k, n): no k of the n pieces form a k-gon
    None,
    /// Q_bar(k, n): at least one k-subset fails to form a k-gon
    NotAll,
    /// Q(k, n): every k-subset forms a k-gon
    All,
    /// P_rand(k, n): a uniformly chosen k-subset fails to form a k-gon
    RandomSubset,
    /// E[H(k, n)]: expected number of failing k-subsets
    ExpectedBad,
}

impl Problem {
    fn label(self) -> &'static str {
        match self {
            Problem::None => "none",
            Problem::NotAll => "not_all",
            Problem::All => "all",
            Problem::RandomSubset => "random_subset",
            Problem::ExpectedBad => "expected_bad",
        }
    }

    fn exact(self, k: usize, n: usize) -> brokenstick::Result<BigRational> {
        match self {
            Problem::None => prob_none_exact(k, n),
            Problem::NotAll => prob_not_all_exact(k, n),
            Problem::All => prob_all_exact(k, n),
            Problem::RandomSubset => prob_random_subset(k, n),
            Problem::ExpectedBad => expected_bad_subsets(k, n),
        }
    }

    /// Log-domain float route, available where a pure product formula
    /// exists. The random-subset probability equals the no-k-gon
    /// probability at n = k, so it reuses that path.
    fn float(self, k: usize, n: usize) -> Option<brokenstick::Result<FloatProb>> {
        match self {
            Problem::None => Some(prob_none_float(k, n)),
            Problem::RandomSubset => Some(prob_none_float(k, k)),
            _ => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// big-rational arithmetic, printed as num/den plus a decimal
    Exact,
    /// log-domain floating point only
    Float,
    /// both routes plus their relative difference
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Gen {
    /// sort n - 1 uniform cut points
    Uniform,
    /// normalize n exponential draws
    Exponential,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    /// Problems to include, comma separated
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "none,not_all,all,random_subset,expected_bad"
    )]
    problems: Vec<Problem>,
    #[arg(long)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// RNG seed; the BROKENSTICK_SEED environment variable overrides the
    /// default and an explicit flag overrides both
    #[arg(long, env = "BROKENSTICK_SEED", default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Independent RNG streams; results are identical for a fixed stream
    /// count regardless of how the work is scheduled
    #[arg(long, default_value_t = selftest::STREAMS)]
    streams: u32,
    #[arg(long, value_enum, default_value_t = Gen::Uniform)]
    generator: Gen,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct ReconcileArgs {
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Fault injection for tests: add 1 to xi(j) before verifying
    #[arg(long, hide = true, value_name = "J")]
    corrupt_xi: Option<usize>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only the exact-arithmetic criteria (finishes in seconds)
    #[arg(long, conflicts_with = "criterion")]
    quick: bool,
    /// Run a single criterion by id (1..=9)
    #[arg(long)]
    criterion: Option<usize>,
    #[arg(long, env = "BROKENSTICK_SEED", default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
}

/// A message plus the exit code it should produce.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<brokenstick::Error> for Failure {
    fn from(e: brokenstick::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

/// Writes one line to stdout. A broken pipe (the reader went away, e.g.
/// when piped into head) ends the process quietly instead of panicking;
/// any other write failure is reported and fatal.
fn out_line(line: &str) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    let result = out
        .write_all(line.as_bytes())
        .and_then(|()| out.write_all(b"\n"));
    if let Err(e) = result {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Exact(args) => run_exact(&args),
        Command::Table(args) => run_table(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Reconcile(args) => run_reconcile(&args),
        Command::Selftest(args) => run_selftest(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run_exact(args: &ExactArgs) -> Result<u8, Failure> {
    let (k, n) = (args.k, args.n);
    let mut record = ResultRecord::new(args.problem.label(), k, n, mode_name(args.mode));

    if matches!(args.mode, Mode::Float | Mode::Both) {
        let Some(float) = args.problem.float(k, n) else {
            return Err(Failure::usage(format!(
                "mode '{}' is only available for problems 'none' and 'random_subset'",
                mode_name(args.mode)
            )));
        };
        let fp = float?;
        record.float = Some(fp.prob);
        record.log_prob = Some(fp.log_prob);
    }
    if matches!(args.mode, Mode::Exact | Mode::Both) {
        let exact = args.problem.exact(k, n)?;
        if let Some(log_prob) = record.log_prob {
            record.rel_diff = Some((log_prob - ln_rational(&exact)).exp_m1().abs());
        }
        record = record.with_exact(&exact);
    }

    match args.format {
        Format::Plain => out_line(&plain_line(&record)),
        Format::Json => out_line(&json_line(&record)),
        Format::Csv => {
            if args.mode != Mode::Exact {
                return Err(Failure::usage(
                    "csv output carries exact values only; use --mode exact",
                ));
            }
            out_line(CSV_HEADER);
            out_line(&csv_row(&record));
        }
    }
    Ok(0)
}

fn run_table(args: &TableArgs) -> Result<u8, Failure> {
    if args.k_min < 3 {
        return Err(Failure::usage("k ranges start at 3"));
    }
    if args.k_min > args.k_max || args.n_min > args.n_max {
        return Err(Failure::usage(
            "empty range: require k_min <= k_max and n_min <= n_max",
        ));
    }
    if args.problems.is_empty() {
        return Err(Failure::usage("no problems selected"));
    }
    out_line(CSV_HEADER);
    for &problem in &args.problems {
        for k in args.k_min..=args.k_max {
            for n in args.n_min.max(k)..=args.n_max {
                let value = problem.exact(k, n)?;
                let record = ResultRecord::new(problem.label(), k, n, "exact").with_exact(&value);
                out_line(&csv_row(&record));
            }
        }
    }
    Ok(0)
}

fn run_simulate(args: &SimulateArgs) -> Result<u8, Failure> {
    if args.format == Format::Csv {
        return Err(Failure::usage("simulate prints plain or json, not csv"));
    }
    if args.streams == 0 {
        return Err(Failure::usage("streams must be at least 1"));
    }
    let (k, n) = (args.k, args.n);
    let generator = match args.generator {
        Gen::Uniform => Generator::UniformCuts,
        Gen::Exponential => Generator::ExponentialNormalized,
    };
    let mut record = ResultRecord::new(args.problem.label(), k, n, "simulate");

    if args.problem == Problem::ExpectedBad {
        if args.generator != Gen::Uniform {
            return Err(Failure::usage(
                "expected_bad enumerates subsets under the uniform-cut generator only",
            ));
        }
        let est = estimate_mean_bad_subsets(k, n, args.trials, args.seed, args.streams)?;
        if n <= Z_SCORE_MAX_N && est.std_err > 0.0 {
            let exact = output::as_f64(&expected_bad_subsets(k, n)?);
            record.z_score = Some((est.mean - exact) / est.std_err);
        }
        record.mean_estimate = Some(est);
    } else {
        let (event, complement) = match args.problem {
            Problem::None => (Event::None, false),
            Problem::NotAll => (Event::NotAll, false),
            // every-subset-closes is estimated off the same trials as its
            // complement, then mirrored
            Problem::All => (Event::NotAll, true),
            Problem::RandomSubset => (Event::RandomSubset, false),
            Problem::ExpectedBad => unreachable!(),
        };
        let mut est = estimate_probability_with_generator(
            event,
            k,
            n,
            args.trials,
            args.seed,
            args.streams,
            generator,
        )?;
        if complement {
            est.event_name = args.problem.label().to_string();
            est.successes = est.trials - est.successes;
            est.p_hat = 1.0 - est.p_hat;
            let (low, high) = wilson_interval(est.successes, est.trials);
            est.ci_low = low;
            est.ci_high = high;
        }
        if n <= Z_SCORE_MAX_N {
            let exact = output::as_f64(&args.problem.exact(k, n)?);
            let sigma = (exact * (1.0 - exact) / args.trials as f64).sqrt();
            if sigma > 0.0 {
                record.z_score = Some((est.p_hat - exact) / sigma);
            }
        }
        record.estimate = Some(est);
    }

    match args.format {
        Format::Plain => out_line(&plain_line(&record)),
        Format::Json => out_line(&json_line(&record)),
        Format::Csv => unreachable!(),
    }
    Ok(0)
}

fn run_reconcile(args: &ReconcileArgs) -> Result<u8, Failure> {
    let (k, n) = (args.k, args.n);
    let betas = beta_backward(k, n)?;
    let mut seqs = build_sequences(k, n)?;
    if let Some(j) = args.corrupt_xi {
        if j > n {
            return Err(Failure::usage(format!("xi index {j} out of range 0..={n}")));
        }
        seqs.xi[j] += 1u32;
    }
    let mut report = verify_sequences(&seqs, &betas);
    // verify_sequences covers the identity sweep; on top of that, compare
    // the two fully reduced probabilities end to end
    let direct = prob_none_exact(k, n)?;
    let via_seqs = brokenstick::prob_none_verreault(k, n)?;
    report.checks += 1;
    if direct != via_seqs {
        report.violations.push(format!(
            "probability mismatch: beta route {direct} vs sequence route {via_seqs}"
        ));
    }

    print_reconcile(&report, args.format)?;
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn print_reconcile(report: &ReconcileReport, format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => out_line(&serde_json::to_string(report).expect("report serializes")),
        Format::Plain => {
            if report.all_hold() {
                out_line(&format!(
                    "reconcile(k={}, n={}): {} identities checked, all hold",
                    report.k, report.n, report.checks
                ));
            } else {
                out_line(&format!(
                    "reconcile(k={}, n={}): {} of {} identities violated",
                    report.k,
                    report.n,
                    report.violations.len(),
                    report.checks
                ));
                for v in &report.violations {
                    out_line(&format!("  {v}"));
                }
            }
        }
        Format::Csv => {
            return Err(Failure::usage("reconcile prints plain or json, not csv"));
        }
    }
    Ok(())
}

fn run_selftest(args: &SelftestArgs) -> Result<u8, Failure> {
    let results = match args.criterion {
        Some(id) => {
            if !(1..=9).contains(&id) {
                return Err(Failure::usage("criterion ids run from 1 to 9"));
            }
            vec![selftest::run_criterion(id, args.seed)]
        }
        None => selftest::run_all(args.seed, args.quick),
    };
    for r in &results {
        out_line(&selftest::format_line(r));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out_line(&format!(
        "selftest: {passed}/{} criteria passed",
        results.len()
    ));
    Ok(if passed == results.len() { 0 } else { 1 })
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
        Mode::Both => "both",
    }
}
