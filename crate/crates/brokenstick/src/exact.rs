//! Exact rational answers to the three subset questions on a randomly
//! broken stick: no k-subset forms a k-gon, not every k-subset forms one,
//! every k-subset forms one, a uniformly random k-subset fails, and the
//! expected number of failing k-subsets.
//!
//! All alternating sums run in reduced big-rational arithmetic; they cancel
//! catastrophically in floating point. The only float route is
//! `prob_none_float`, which works factor by factor in the log domain.

use crate::beta::beta_backward;
use crate::error::{check_domain, Result};
use crate::rational::{binomial, factorial, falling_quotient, ln_biguint};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Probability that no choice of k pieces out of n forms a k-gon:
/// n! divided by the product of the beta integers, fully reduced.
pub fn prob_none_exact(k: usize, n: usize) -> Result<BigRational> {
    let betas = beta_backward(k, n)?;
    Ok(BigRational::new(
        BigInt::from(factorial(n)),
        BigInt::from(betas.product()),
    ))
}

/// The same probability as a float, with its natural log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatProb {
    /// exp(log_prob); underflows to 0 once the log drops below ~-745
    pub prob: f64,
    /// always finite for a valid domain
    pub log_prob: f64,
}

/// Factor-by-factor evaluation of the same quantity as a product of ratios
/// (n-r+1)/beta_r, accumulated as a sum of logs so neither n! nor the beta
/// product is ever materialized in floating point.
pub fn prob_none_float(k: usize, n: usize) -> Result<FloatProb> {
    let betas = beta_backward(k, n)?;
    let mut log_prob = 0.0;
    for r in 1..=n {
        log_prob += ((n - r + 1) as f64).ln() - ln_biguint(betas.beta(r));
    }
    Ok(FloatProb {
        prob: log_prob.exp(),
        log_prob,
    })
}

/// Denominator coefficients of the two alternating-sum formulas.
///
/// `c(r, j) = (j+2)(k-1-r) + n-k+2` for 1 <= r <= k-1, 0 <= j <= n-k, and
/// `lambda(r, j) = r+1 + (n-k+2)/j` for 0 <= r <= k-3, 1 <= j <= n-k+2.
/// The last c row is constant at n-k+2, which the constructor asserts.
#[derive(Debug, Clone)]
pub struct TermCoefficients {
    k: usize,
    n: usize,
    c: Vec<Vec<BigUint>>,
    lambda: Vec<Vec<BigRational>>,
}

impl TermCoefficients {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        check_domain(k, n)?;
        let m = n - k + 2;
        let c: Vec<Vec<BigUint>> = (1..=k - 1)
            .map(|r| {
                (0..=n - k)
                    .map(|j| BigUint::from((j + 2) * (k - 1 - r) + m))
                    .collect()
            })
            .collect();
        for entry in &c[k - 2] {
            debug_assert_eq!(*entry, BigUint::from(m), "last c row must be n-k+2");
        }
        let lambda: Vec<Vec<BigRational>> = (0..k.saturating_sub(2))
            .map(|r| {
                (1..=m)
                    .map(|j| {
                        BigRational::from(BigInt::from(r + 1))
                            + BigRational::new(BigInt::from(m), BigInt::from(j))
                    })
                    .collect()
            })
            .collect();
        Ok(TermCoefficients { k, n, c, lambda })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// c_rj, 1-based r in 1..=k-1, j in 0..=n-k.
    pub fn c(&self, r: usize, j: usize) -> &BigUint {
        &self.c[r - 1][j]
    }

    /// lambda_rj, r in 0..=k-3, j in 1..=n-k+2.
    pub fn lambda(&self, r: usize, j: usize) -> &BigRational {
        &self.lambda[r][j - 1]
    }
}

/// Probability that at least one choice of k pieces fails to form a k-gon:
/// [n!/(n-k+2)!] * sum_{j=0}^{n-k} (-1)^j C(n-k+1, j+1) / prod_{r=1}^{k-2} c_rj.
/// For k = 3 the product has the single factor c_1j.
pub fn prob_not_all_exact(k: usize, n: usize) -> Result<BigRational> {
    let tc = TermCoefficients::new(k, n)?;
    let mut sum = BigRational::zero();
    for j in 0..=n - k {
        let mut denom = BigUint::one();
        for r in 1..=k - 2 {
            denom *= tc.c(r, j);
        }
        let term = BigRational::new(
            BigInt::from(binomial(n - k + 1, j + 1)),
            BigInt::from(denom),
        );
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let prefactor = BigRational::from(BigInt::from(falling_quotient(n, n - k + 2)));
    Ok(prefactor * sum)
}

/// Probability that every choice of k pieces forms a k-gon:
/// [n!/((n-k+2)! (n-k+2))] * sum_{j=1}^{n-k+2} (-1)^{j+1} j^{-(k-3)}
/// C(n-k+2, j) / prod_{r=0}^{k-3} lambda_rj. Complements prob_not_all_exact
/// exactly; the two are computed along different routes on purpose.
pub fn prob_all_exact(k: usize, n: usize) -> Result<BigRational> {
    let tc = TermCoefficients::new(k, n)?;
    let m = n - k + 2;
    let mut sum = BigRational::zero();
    for j in 1..=m {
        let mut denom = BigRational::one();
        for r in 0..=k - 3 {
            denom *= tc.lambda(r, j);
        }
        let j_power = num_traits::pow(BigUint::from(j), k - 3);
        let term = BigRational::new(BigInt::from(binomial(m, j)), BigInt::from(j_power)) / denom;
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let prefactor = BigRational::new(BigInt::from(falling_quotient(n, m)), BigInt::from(m));
    Ok(prefactor * sum)
}

/// Probability that one uniformly random k-subset fails to form a k-gon.
/// Does not depend on n: the answer is the diagonal value for k pieces,
/// verified here against its closed form k/2^(k-1) on every call.
pub fn prob_random_subset(k: usize, n: usize) -> Result<BigRational> {
    check_domain(k, n)?;
    let p = prob_none_exact(k, k)?;
    let closed = BigRational::new(BigInt::from(k), BigInt::from(BigUint::one() << (k - 1)));
    assert_eq!(
        p, closed,
        "beta product route disagrees with the closed form k/2^(k-1) at k={k}"
    );
    Ok(p)
}

/// Expected number of k-subsets that fail to form a k-gon: C(n,k) * k/2^(k-1).
pub fn expected_bad_subsets(k: usize, n: usize) -> Result<BigRational> {
    check_domain(k, n)?;
    Ok(BigRational::new(
        BigInt::from(binomial(n, k)) * BigInt::from(k),
        BigInt::from(BigUint::one() << (k - 1)),
    ))
}
