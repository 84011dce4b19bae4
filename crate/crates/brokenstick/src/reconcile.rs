//! Independent sequence systems that rebuild the beta family and the
//! no-k-gon probability along a second route, due to Verreault: an
//! order-(k-1) generalized Fibonacci sequence F, its partial sums f, and
//! the derived g/h family. Cross-checking these against the beta recursion
//! (via the index maps xi and mu) exercises every identity that ties the
//! two formulations together.
//!
//! Index conventions, all matching the formulas' subscripts:
//! - `fib[u]` is F_u for u = 0..=n, with F_0 = ... = F_{k-3} = 0, F_{k-2} = 1
//! - `f[j]` is f(j) = F_0 + ... + F_j
//! - `g[u-2]` is g(u) and `h[j-2]` is h(j), both for 2..=k-2 (empty at k = 3)
//! - `xi[j]` is beta_{n+k-2-j} (zero above n), `mu[j-2]` is beta_{k-1-j}

use crate::beta::{beta_backward, BetaVector};
use crate::error::{check_domain, Result};
use crate::rational::factorial;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// All six sequences for one (k, n). Fields are public so tests can inspect
/// or deliberately corrupt them before verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconcileSequences {
    pub k: usize,
    pub n: usize,
    pub fib: Vec<BigUint>,
    pub f: Vec<BigUint>,
    pub g: Vec<BigUint>,
    pub h: Vec<BigUint>,
    pub xi: Vec<BigUint>,
    pub mu: Vec<BigUint>,
}

impl ReconcileSequences {
    /// f(j) with the formula's index.
    pub fn f_at(&self, j: usize) -> &BigUint {
        &self.f[j]
    }

    /// g(u) for u in 2..=k-2.
    pub fn g_at(&self, u: usize) -> &BigUint {
        &self.g[u - 2]
    }

    /// h(j) for j in 2..=k-2.
    pub fn h_at(&self, j: usize) -> &BigUint {
        &self.h[j - 2]
    }

    /// xi_j for j in 0..=n.
    pub fn xi_at(&self, j: usize) -> &BigUint {
        &self.xi[j]
    }

    /// mu_j for j in 2..=k-2.
    pub fn mu_at(&self, j: usize) -> &BigUint {
        &self.mu[j - 2]
    }
}

/// Outcome of an identity sweep. `violations` holds one line per failed
/// identity, in discovery order; empty means everything held.
#[derive(Debug, Clone, Serialize)]
pub struct ReconcileReport {
    pub k: usize,
    pub n: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl ReconcileReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

/// Builds F, f, g, h from their defining recursions and xi, mu from an
/// independently computed BetaVector via the index maps. The zero prefix
/// and unit seed of xi are asserted rather than assumed.
pub fn build_sequences(k: usize, n: usize) -> Result<ReconcileSequences> {
    check_domain(k, n)?;

    // F: single unit seed at k-2, then the order-(k-1) window sum.
    let mut fib = vec![BigUint::zero(); n + 1];
    fib[k - 2] = BigUint::one();
    let mut window: BigUint = BigUint::one(); // sum of the k-1 entries behind u
    for u in k - 1..=n {
        let fu = window.clone();
        window += &fu;
        if u >= k - 1 {
            // entry u-(k-1) leaves the window
            window -= fib[u - (k - 1)].clone();
        }
        fib[u] = fu;
    }

    let mut f = Vec::with_capacity(n + 1);
    let mut running = BigUint::zero();
    for fu in &fib {
        running += fu;
        f.push(running.clone());
    }

    // g(2) = 1 + f(n-2), then g(u) = g(u-1) + f(n-u); empty for k = 3.
    let mut g: Vec<BigUint> = Vec::new();
    for u in 2..=k.saturating_sub(2) {
        let value = if u == 2 {
            &f[n - 2] + 1u32
        } else {
            &g[u - 3] + &f[n - u]
        };
        g.push(value);
    }

    // h(2) = f(n) + g(k-2), then h(j) = h(j-1) + g(k-j); empty for k = 3.
    let mut h: Vec<BigUint> = Vec::new();
    for j in 2..=k.saturating_sub(2) {
        let value = if j == 2 {
            &f[n] + &g[k - 2 - 2]
        } else {
            &h[j - 3] + &g[k - j - 2]
        };
        h.push(value);
    }

    let betas = beta_backward(k, n)?;
    let mut xi = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let idx = n + k - 2 - j; // 1-based beta subscript
        xi.push(if idx > n {
            BigUint::zero()
        } else {
            betas.beta(idx).clone()
        });
    }
    for leading in &xi[..k - 2] {
        assert!(leading.is_zero(), "xi must start with k-2 zeros");
    }
    assert!(xi[k - 2].is_one(), "xi_(k-2) must be 1");

    let mut mu = Vec::new();
    for j in 2..=k.saturating_sub(2) {
        mu.push(betas.beta(k - 1 - j).clone());
    }

    Ok(ReconcileSequences {
        k,
        n,
        fib,
        f,
        g,
        h,
        xi,
        mu,
    })
}

/// Verifies the two simplified recursions that eliminate F and g:
/// f(j) = 1 + f(j-1) + ... + f(j-k+1) for j = k-1..=n (indices below zero
/// read as zero), and h(2) = 1 + f(n) + f(n-2) + ... + f(n-k+2) with
/// h(j) = 1 + h(j-1) + f(n-2) + ... + f(n-k+j) for j = 3..=k-2.
pub fn check_simplified_recursions(seqs: &ReconcileSequences) -> ReconcileReport {
    let (k, n) = (seqs.k, seqs.n);
    let mut checks = 0;
    let mut violations = Vec::new();

    for j in k - 1..=n {
        let mut expect = BigUint::one();
        for r in 1..=k - 1 {
            if j >= r {
                expect += &seqs.f[j - r];
            }
        }
        checks += 1;
        if seqs.f[j] != expect {
            violations.push(format!(
                "f({j}) = {} but 1 + f({}) + ... + f({}) = {expect}",
                seqs.f[j],
                j - 1,
                j as i64 - (k as i64 - 1),
            ));
        }
    }

    for j in 2..=k.saturating_sub(2) {
        let mut expect = BigUint::one();
        if j == 2 {
            expect += &seqs.f[n];
        } else {
            expect += seqs.h_at(j - 1);
        }
        for r in 2..=k - j {
            expect += &seqs.f[n - r];
        }
        checks += 1;
        if *seqs.h_at(j) != expect {
            violations.push(format!(
                "h({j}) = {} but its simplified recursion gives {expect}",
                seqs.h_at(j)
            ));
        }
    }

    ReconcileReport {
        k,
        n,
        checks,
        violations,
    }
}

/// The no-k-gon probability along the sequence route:
/// n! / [f(k-2) f(k-1) ... f(n) * h(2) ... h(k-2)], reduced.
pub fn prob_none_verreault(k: usize, n: usize) -> Result<BigRational> {
    let seqs = build_sequences(k, n)?;
    let mut denom = BigUint::one();
    for j in k - 2..=n {
        denom *= &seqs.f[j];
    }
    for j in 2..=k.saturating_sub(2) {
        denom *= seqs.h_at(j);
    }
    Ok(BigRational::new(
        BigInt::from(factorial(n)),
        BigInt::from(denom),
    ))
}

/// Checks prebuilt sequences against an independently computed BetaVector:
/// the xi/f and mu/h element-wise identities, the zero prefix and unit seed
/// of xi, both simplified recursions, and the equality of the two
/// probability products. Split out from `reconcile_report` so callers can
/// verify deliberately corrupted sequences.
pub fn verify_sequences(seqs: &ReconcileSequences, betas: &BetaVector) -> ReconcileReport {
    let (k, n) = (seqs.k, seqs.n);
    let mut report = check_simplified_recursions(seqs);

    for j in 0..k - 2 {
        report.checks += 1;
        if !seqs.xi[j].is_zero() {
            report.violations.push(format!(
                "xi({j}) = {} but the leading xi must be 0",
                seqs.xi[j]
            ));
        }
    }
    report.checks += 1;
    if !seqs.xi[k - 2].is_one() {
        report
            .violations
            .push(format!("xi({}) = {} but must be 1", k - 2, seqs.xi[k - 2]));
    }

    for j in k - 2..=n {
        report.checks += 1;
        if seqs.xi[j] != seqs.f[j] {
            report.violations.push(format!(
                "xi({j}) = {} but f({j}) = {}",
                seqs.xi[j], seqs.f[j]
            ));
        }
    }
    for j in 2..=k.saturating_sub(2) {
        report.checks += 1;
        if seqs.mu_at(j) != seqs.h_at(j) {
            report.violations.push(format!(
                "mu({j}) = {} but h({j}) = {}",
                seqs.mu_at(j),
                seqs.h_at(j)
            ));
        }
    }

    // product identity: f/h denominator vs the beta product
    let mut seq_denom = BigUint::one();
    for j in k - 2..=n {
        seq_denom *= &seqs.f[j];
    }
    for j in 2..=k.saturating_sub(2) {
        seq_denom *= seqs.h_at(j);
    }
    report.checks += 1;
    let beta_product = betas.product();
    if seq_denom != beta_product {
        report.violations.push(format!(
            "sequence product {seq_denom} differs from beta product {beta_product}"
        ));
    }

    report
}

/// Builds everything for (k, n) and verifies the full identity sweep.
pub fn reconcile_report(k: usize, n: usize) -> Result<ReconcileReport> {
    let seqs = build_sequences(k, n)?;
    let betas = beta_backward(k, n)?;
    Ok(verify_sequences(&seqs, &betas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::prob_none_exact;

    fn u64s(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|b| u64::try_from(b).expect("fits")).collect()
    }

    #[test]
    fn sequences_for_3_4_by_hand() {
        let s = build_sequences(3, 4).unwrap();
        assert_eq!(u64s(&s.fib), vec![0, 1, 1, 2, 3]);
        assert_eq!(u64s(&s.f), vec![0, 1, 2, 4, 7]);
        assert!(s.g.is_empty() && s.h.is_empty() && s.mu.is_empty());
        // xi_j = beta_(5-j) against beta = (7, 4, 2, 1)
        assert_eq!(u64s(&s.xi), vec![0, 1, 2, 4, 7]);
    }

    #[test]
    fn sequences_for_5_8_by_hand() {
        let s = build_sequences(5, 8).unwrap();
        assert_eq!(u64s(&s.fib), vec![0, 0, 0, 1, 1, 2, 4, 8, 15]);
        assert_eq!(u64s(&s.f), vec![0, 0, 0, 1, 2, 4, 8, 16, 31]);
        assert_eq!(u64s(&s.g), vec![9, 13]);
        assert_eq!(u64s(&s.h), vec![44, 53]);
        assert_eq!(u64s(&s.xi), vec![0, 0, 0, 1, 2, 4, 8, 16, 31]);
        assert_eq!(u64s(&s.mu), vec![44, 53]);
    }

    #[test]
    fn classic_fibonacci_at_k_3() {
        let s = build_sequences(3, 12).unwrap();
        let fib = u64s(&s.fib);
        assert_eq!(fib[1], 1);
        assert_eq!(fib[2], 1);
        for u in 3..=12 {
            assert_eq!(fib[u], fib[u - 1] + fib[u - 2]);
        }
    }

    #[test]
    fn simplified_recursions_hold() {
        for &(k, n) in &[(3usize, 4usize), (3, 25), (5, 8), (7, 7), (6, 30)] {
            let s = build_sequences(k, n).unwrap();
            let rep = check_simplified_recursions(&s);
            assert!(
                rep.all_hold(),
                "failed at k={k} n={n}: {:?}",
                rep.violations
            );
            assert!(rep.checks > 0);
        }
        // spot value: f(3) = 1 + f(2) + f(1) at (3, 4)
        let s = build_sequences(3, 4).unwrap();
        assert_eq!(u64::try_from(s.f_at(3)).unwrap(), 4);
    }

    #[test]
    fn verreault_route_matches_direct_route() {
        assert_eq!(
            prob_none_verreault(3, 3).unwrap(),
            prob_none_exact(3, 3).unwrap()
        );
        // denominator 1*2*4*7 = 56 at (3,4): 24/56 = 3/7
        let p = prob_none_verreault(3, 4).unwrap();
        assert_eq!(p, prob_none_exact(3, 4).unwrap());
        for n in 3..=25 {
            for k in 3..=n {
                assert_eq!(
                    prob_none_verreault(k, n).unwrap(),
                    prob_none_exact(k, n).unwrap(),
                    "divergence at k={k}, n={n}"
                );
            }
        }
    }

    #[test]
    fn reports_hold_on_reference_pairs() {
        for &(k, n) in &[(3usize, 12usize), (7, 7), (3, 3), (6, 20)] {
            let rep = reconcile_report(k, n).unwrap();
            assert!(
                rep.all_hold(),
                "violations at k={k} n={n}: {:?}",
                rep.violations
            );
        }
        // the (3,3) xi segment on j = 1..=3 is the f segment (1, 2, 4)
        let s = build_sequences(3, 3).unwrap();
        assert_eq!(u64s(&s.xi)[1..], [1, 2, 4]);
        assert_eq!(u64s(&s.f)[1..], [1, 2, 4]);
    }

    #[test]
    fn corrupted_sequences_are_flagged() {
        let mut s = build_sequences(5, 8).unwrap();
        s.xi[6] += 1u32;
        let betas = beta_backward(5, 8).unwrap();
        let rep = verify_sequences(&s, &betas);
        assert!(!rep.all_hold());
        assert!(
            rep.first_failure().unwrap().contains("xi(6)"),
            "failure should name the xi identity: {:?}",
            rep.violations
        );
    }

    #[test]
    fn f_is_nondecreasing_and_positive_past_seed() {
        for &(k, n) in &[(3usize, 40usize), (5, 30), (9, 22)] {
            let s = build_sequences(k, n).unwrap();
            for j in 1..=n {
                assert!(s.f[j] >= s.f[j - 1]);
            }
            for j in k - 2..=n {
                assert!(!s.f[j].is_zero());
            }
        }
    }
}
