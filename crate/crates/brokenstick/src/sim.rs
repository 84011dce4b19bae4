//! Seedable, splittable Monte Carlo engine for the stick events.
//!
//! Sampling runs on ChaCha8 streams: every worker derives its generator
//! from (master seed, stream index), trials are split deterministically
//! across streams, and per-stream hit counts are aggregated as exact
//! integers, so results are bit-identical for fixed parameters no matter
//! how the streams are scheduled.

use crate::error::{check_domain, Error, Result};
use crate::oracle;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// One random partition of the unit stick into n positive pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct StickSample {
    pieces: Vec<f64>,
    sorted: Vec<f64>,
}

impl StickSample {
    /// Validates positivity and a total of 1 within 1e-12.
    pub fn from_pieces(pieces: Vec<f64>) -> Result<StickSample> {
        for (index, &p) in pieces.iter().enumerate() {
            if p <= 0.0 || !p.is_finite() {
                return Err(Error::NonPositiveLength { index });
            }
        }
        let sum: f64 = pieces.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadPieceSum { sum });
        }
        Ok(StickSample::new_unchecked(pieces))
    }

    fn new_unchecked(pieces: Vec<f64>) -> StickSample {
        let mut sorted = pieces.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        StickSample { pieces, sorted }
    }

    pub fn n(&self) -> usize {
        self.pieces.len()
    }

    /// Pieces in generation order.
    pub fn pieces(&self) -> &[f64] {
        &self.pieces
    }

    /// Pieces ascending; `sorted()[r-1]` is the r-th order statistic.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Breaks the stick at n-1 uniform points and takes consecutive spacings.
/// The measure-zero draws with a duplicate cut (a zero piece) are redrawn.
pub fn break_stick<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StickSample {
    assert!(n >= 1, "need at least one piece");
    loop {
        let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
        cuts.sort_unstable_by(f64::total_cmp);
        if let Some(sample) = spacings(&cuts) {
            return sample;
        }
    }
}

/// Spacings of sorted cut points over [0, 1]; None if any spacing is not
/// strictly positive.
fn spacings(sorted_cuts: &[f64]) -> Option<StickSample> {
    let mut pieces = Vec::with_capacity(sorted_cuts.len() + 1);
    let mut prev = 0.0;
    for &c in sorted_cuts {
        pieces.push(c - prev);
        prev = c;
    }
    pieces.push(1.0 - prev);
    if pieces.iter().all(|&p| p > 0.0) {
        Some(StickSample::new_unchecked(pieces))
    } else {
        None
    }
}

/// Deterministic spacing construction from given cut points, for tests.
pub fn break_stick_from_cuts(cuts: &[f64]) -> Result<StickSample> {
    let mut sorted_cuts = cuts.to_vec();
    sorted_cuts.sort_unstable_by(f64::total_cmp);
    for (index, &c) in sorted_cuts.iter().enumerate() {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::NonPositiveLength { index });
        }
    }
    spacings(&sorted_cuts).ok_or(Error::NonPositiveLength { index: 0 })
}

/// Draws n unit-mean exponentials and normalizes by their sum. By the
/// order-statistics equivalence this samples the same piece-length law as
/// `break_stick`, along a completely different route.
pub fn break_stick_exponential<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StickSample {
    assert!(n >= 1, "need at least one piece");
    loop {
        let draws: Vec<f64> = (0..n)
            .map(|_| -(-rng.random::<f64>()).ln_1p()) // -ln(1 - u), u in [0, 1)
            .collect();
        if let Some(sample) = normalize(&draws) {
            return sample;
        }
    }
}

/// Normalization step of the exponential route; None on a zero draw.
pub fn break_stick_from_exponentials(draws: &[f64]) -> Result<StickSample> {
    for (index, &d) in draws.iter().enumerate() {
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NonPositiveLength { index });
        }
    }
    normalize(draws).ok_or(Error::NonPositiveLength { index: 0 })
}

fn normalize(draws: &[f64]) -> Option<StickSample> {
    let total: f64 = draws.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    let pieces: Vec<f64> = draws.iter().map(|&y| y / total).collect();
    if pieces.iter().all(|&p| p > 0.0) {
        Some(StickSample::new_unchecked(pieces))
    } else {
        None
    }
}

/// True iff every window fails going up the order statistics: the r-th
/// sorted piece strictly exceeds the sum of the k-1 pieces just below it,
/// for every r = k..=n. Equivalent to "no k-subset forms a k-gon"; O(n)
/// after sorting via prefix sums.
pub fn no_kgon_event(sample: &StickSample, k: usize) -> Result<bool> {
    let n = sample.n();
    check_domain(k, n)?;
    let s = sample.sorted();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for &x in s {
        acc += x;
        prefix.push(acc);
    }
    for r in k..=n {
        let window = prefix[r - 1] - prefix[r - k];
        // the event needs a strict failure at every r
        if s[r - 1] <= window {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every k-subset forms a k-gon. Only the hardest subset matters:
/// the largest piece against the k-1 smallest.
pub fn all_kgon_event(sample: &StickSample, k: usize) -> Result<bool> {
    let n = sample.n();
    check_domain(k, n)?;
    let s = sample.sorted();
    let small: f64 = s[..k - 1].iter().sum();
    Ok(s[n - 1] < small)
}

/// Draws a uniformly random k-subset of the pieces (independent of their
/// lengths) and reports whether that subset fails to form a k-gon.
pub fn random_subset_event<R: Rng + ?Sized>(
    sample: &StickSample,
    k: usize,
    rng: &mut R,
) -> Result<bool> {
    let n = sample.n();
    check_domain(k, n)?;
    let chosen = rand::seq::index::sample(rng, n, k).into_vec();
    Ok(oracle::subset_fails(sample.pieces(), &chosen))
}

/// Which probability a simulation estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    /// no k-subset forms a k-gon
    None,
    /// at least one k-subset fails
    NotAll,
    /// one uniformly random k-subset fails
    RandomSubset,
}

impl Event {
    pub fn label(self) -> &'static str {
        match self {
            Event::None => "none",
            Event::NotAll => "not_all",
            Event::RandomSubset => "random_subset",
        }
    }
}

/// Which sampling mechanism generates the sticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    UniformCuts,
    ExponentialNormalized,
}

/// A binomial proportion estimate with its Wilson 95% interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub event_name: String,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    /// normal-approximation standard error sqrt(p_hat (1 - p_hat) / trials)
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub streams: u32,
}

/// Sample-mean estimate for the count of failing subsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub trials: u64,
    pub mean: f64,
    pub std_dev: f64,
    /// std_dev / sqrt(trials)
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub streams: u32,
}

const Z95: f64 = 1.96;

/// Wilson score interval at 95%, clamped to [0, 1]. Stays sane when the
/// proportion sits at or near 0 or 1, where the Wald interval collapses.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1);
    let nf = trials as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = p + z2 / (2.0 * nf);
    let margin = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    // The interval contains p by construction; rounding at the endpoints
    // must not be allowed to break that.
    let low = ((center - margin) / denom).max(0.0).min(p);
    let high = ((center + margin) / denom).min(1.0).max(p);
    (low, high)
}

/// Splits `trials` across `streams` ChaCha8 substreams of `seed` and sums
/// per-stream hit counts. Stream i runs trials/streams draws, plus one of
/// the remainder for the lowest i. Aggregation is exact integer addition,
/// so the result does not depend on scheduling.
fn run_streams<F>(trials: u64, seed: u64, streams: u32, per_trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let base = trials / streams as u64;
    let extra = trials % streams as u64;
    (0..streams)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let quota = base + u64::from((i as u64) < extra);
            let mut hits = 0u64;
            for _ in 0..quota {
                if per_trial(&mut rng) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Generator for one substream: ChaCha8 keyed by the master seed, stream
/// field set to the stream index.
fn stream_rng(seed: u64, stream: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

fn finish_estimate(label: &str, trials: u64, successes: u64, seed: u64, streams: u32) -> Estimate {
    let p_hat = successes as f64 / trials as f64;
    let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Estimate {
        event_name: label.to_string(),
        trials,
        successes,
        p_hat,
        std_err,
        ci_low,
        ci_high,
        seed,
        streams,
    }
}

/// Estimates one event probability with the uniform-cut generator.
pub fn estimate_probability(
    event: Event,
    k: usize,
    n: usize,
    trials: u64,
    seed: u64,
    streams: u32,
) -> Result<Estimate> {
    estimate_probability_with_generator(event, k, n, trials, seed, streams, Generator::UniformCuts)
}

/// Same estimate with an explicit choice of stick generator, so the two
/// mechanisms can be compared against each other.
pub fn estimate_probability_with_generator(
    event: Event,
    k: usize,
    n: usize,
    trials: u64,
    seed: u64,
    streams: u32,
    generator: Generator,
) -> Result<Estimate> {
    check_domain(k, n)?;
    if trials == 0 {
        return Err(Error::TooFewTrials { min: 1 });
    }
    assert!(streams >= 1, "need at least one stream");
    let successes = run_streams(trials, seed, streams, |rng| {
        let sample = match generator {
            Generator::UniformCuts => break_stick(n, rng),
            Generator::ExponentialNormalized => break_stick_exponential(n, rng),
        };
        match event {
            Event::None => no_kgon_event(&sample, k).expect("domain checked"),
            Event::NotAll => !all_kgon_event(&sample, k).expect("domain checked"),
            Event::RandomSubset => random_subset_event(&sample, k, rng).expect("domain checked"),
        }
    });
    Ok(finish_estimate(
        event.label(),
        trials,
        successes,
        seed,
        streams,
    ))
}

/// Mean of the failing-subset count over full-enumeration trials, with a
/// normal 95% CI for the mean. Each trial costs C(n, k) subset checks, so
/// the oracle budget applies.
pub fn estimate_mean_bad_subsets(
    k: usize,
    n: usize,
    trials: u64,
    seed: u64,
    streams: u32,
) -> Result<MeanEstimate> {
    check_domain(k, n)?;
    if trials < 2 {
        return Err(Error::TooFewTrials { min: 2 });
    }
    assert!(streams >= 1, "need at least one stream");
    // budget probe; the per-sample counts reuse the same bound
    oracle::enumerate_subsets(n, k)?;

    let base = trials / streams as u64;
    let extra = trials % streams as u64;
    let (sum, sum_sq) = (0..streams)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let quota = base + u64::from((i as u64) < extra);
            let mut s = 0u128;
            let mut s2 = 0u128;
            for _ in 0..quota {
                let sample = break_stick(n, &mut rng);
                let h = oracle::count_bad_subsets(&sample, k).expect("budget checked") as u128;
                s += h;
                s2 += h * h;
            }
            (s, s2)
        })
        .reduce(|| (0u128, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));

    let nf = trials as f64;
    let mean = sum as f64 / nf;
    let var = ((sum_sq as f64) - (sum as f64) * mean).max(0.0) / (nf - 1.0);
    let std_dev = var.sqrt();
    let std_err = std_dev / nf.sqrt();
    Ok(MeanEstimate {
        trials,
        mean,
        std_dev,
        std_err,
        ci_low: mean - Z95 * std_err,
        ci_high: mean + Z95 * std_err,
        seed,
        streams,
    })
}
