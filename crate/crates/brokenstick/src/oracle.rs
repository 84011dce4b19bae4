//! Brute-force ground truth: enumerate k-subsets of the pieces and apply
//! the polygon inequality to each. Deliberately simple and independent of
//! the closed-form machinery so the two can check each other.

use crate::error::{check_domain, Error, Result};
use crate::rational::binomial;
use crate::sim::StickSample;
use num_bigint::BigUint;

/// Hard cap on C(n, k) for any enumeration; exceeding it is a typed error,
/// never a silent truncation.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1_000_000;

/// True iff the lengths can close into a polygon: the largest is strictly
/// below the sum of the others. The degenerate tie counts as not forming
/// here, and as forming in the failure test below; both follow from keeping
/// every inequality strict.
pub fn kgon_feasible(lengths: &[f64]) -> Result<bool> {
    if lengths.len() < 3 {
        return Err(Error::TooFewLengths { got: lengths.len() });
    }
    for (index, &x) in lengths.iter().enumerate() {
        if x <= 0.0 || !x.is_finite() {
            return Err(Error::NonPositiveLength { index });
        }
    }
    let (imax, rest) = split_max(lengths, None);
    Ok(lengths[imax] < rest)
}

/// Strict failure test on a subset of `pieces`: max > sum of the rest.
/// The rest is summed directly, element by element, rather than as
/// total - max; the subtraction form picks up rounding that flips
/// degenerate examples like (0.1, 0.2, 0.3).
pub(crate) fn subset_fails(pieces: &[f64], subset: &[usize]) -> bool {
    let (imax, rest) = split_max(pieces, Some(subset));
    pieces[imax] > rest
}

/// Returns the index of the maximum and the left-to-right sum of the other
/// entries, over the whole slice or over a subset of indices.
fn split_max(pieces: &[f64], subset: Option<&[usize]>) -> (usize, f64) {
    let pick = |i: usize| -> usize {
        match subset {
            Some(s) => s[i],
            None => i,
        }
    };
    let len = subset.map_or(pieces.len(), <[usize]>::len);
    let mut imax = pick(0);
    for i in 1..len {
        let idx = pick(i);
        if pieces[idx] > pieces[imax] {
            imax = idx;
        }
    }
    let mut rest = 0.0;
    for i in 0..len {
        let idx = pick(i);
        if idx != imax {
            rest += pieces[idx];
        }
    }
    (imax, rest)
}

/// One k-subset in lexicographic position, carrying 1-based indices to match
/// the usual i_1 < i_2 < ... < i_k notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetChoice {
    indices: Vec<usize>,
}

impl SubsetChoice {
    /// Strictly increasing, each in 1..=n.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

fn budget_check(n: usize, k: usize, budget: u64) -> Result<()> {
    if binomial(n, k) > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { n, k, budget });
    }
    Ok(())
}

/// Advances a 0-based combination cursor to the next lexicographic position.
/// Returns false once the last combination has been passed.
fn advance(cursor: &mut [usize], n: usize) -> bool {
    let k = cursor.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if cursor[i] < n - k + i {
            cursor[i] += 1;
            for j in i + 1..k {
                cursor[j] = cursor[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All C(n, k) subsets exactly once, lexicographically.
#[derive(Debug, Clone)]
pub struct SubsetIter {
    n: usize,
    cursor: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = SubsetChoice;

    fn next(&mut self) -> Option<SubsetChoice> {
        if self.done {
            return None;
        }
        if self.started && !advance(&mut self.cursor, self.n) {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(SubsetChoice {
            indices: self.cursor.iter().map(|i| i + 1).collect(),
        })
    }
}

/// Lexicographic enumeration under the default budget.
pub fn enumerate_subsets(n: usize, k: usize) -> Result<SubsetIter> {
    enumerate_subsets_with_budget(n, k, DEFAULT_SUBSET_BUDGET)
}

pub fn enumerate_subsets_with_budget(n: usize, k: usize, budget: u64) -> Result<SubsetIter> {
    check_domain(k, n)?;
    budget_check(n, k, budget)?;
    Ok(SubsetIter {
        n,
        cursor: (0..k).collect(),
        started: false,
        done: false,
    })
}

/// Number of k-subsets of the sample's pieces that fail to form a k-gon.
pub fn count_bad_subsets(sample: &StickSample, k: usize) -> Result<u64> {
    let n = sample.n();
    check_domain(k, n)?;
    budget_check(n, k, DEFAULT_SUBSET_BUDGET)?;
    let pieces = sample.pieces();
    let mut cursor: Vec<usize> = (0..k).collect();
    let mut bad = 0u64;
    loop {
        if subset_fails(pieces, &cursor) {
            bad += 1;
        }
        if !advance(&mut cursor, n) {
            break;
        }
    }
    Ok(bad)
}

/// True iff every k-subset fails, by exhaustive count.
pub fn no_kgon_bruteforce(sample: &StickSample, k: usize) -> Result<bool> {
    let count = count_bad_subsets(sample, k)?;
    let total = binomial(sample.n(), k);
    Ok(BigUint::from(count) == total)
}
