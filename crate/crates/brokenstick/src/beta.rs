//! The beta integers behind the no-k-gon probability.
//!
//! Two independent routes to the same vector: a forward pass that sums the
//! per-position contribution vectors b_r left to right, and a backward pass
//! that runs the equivalent right-to-left recursion. The forward pass costs
//! O(n^2) big-integer additions via a sliding window over the last k-1
//! vectors; the backward pass costs O(n).

use crate::error::{check_domain, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::VecDeque;

/// The positive integers beta_1 > beta_2 > ... > beta_n = 1 for one (k, n).
/// Stored in that order: `as_slice()[0]` is beta_1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaVector {
    k: usize,
    n: usize,
    betas: Vec<BigUint>,
}

impl BetaVector {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// beta_r with 1-based r, matching the formulas' subscripts.
    pub fn beta(&self, r: usize) -> &BigUint {
        &self.betas[r - 1]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.betas
    }

    /// The product beta_1 * beta_2 * ... * beta_n.
    pub fn product(&self) -> BigUint {
        self.betas.iter().product()
    }
}

/// Left-to-right construction: b_1 = e_1, b_r = e_r + b_{r-1} for r < k,
/// b_r = e_r + (b_{r-1} + ... + b_{r-k+1}) for r >= k, and beta = sum of all
/// b_r. The window sum is maintained incrementally so each step costs one
/// vector addition.
pub fn beta_forward(k: usize, n: usize) -> Result<BetaVector> {
    check_domain(k, n)?;
    let zero = vec![BigUint::zero(); n];
    let mut total = zero.clone();
    let mut window: VecDeque<Vec<BigUint>> = VecDeque::with_capacity(k);
    let mut window_sum = zero.clone();
    for r in 1..=n {
        let mut b = if r == 1 {
            zero.clone()
        } else if r < k {
            window.back().expect("previous vector exists").clone()
        } else {
            window_sum.clone()
        };
        b[r - 1] += 1u32;
        for (t, x) in total.iter_mut().zip(&b) {
            *t += x;
        }
        for (w, x) in window_sum.iter_mut().zip(&b) {
            *w += x;
        }
        window.push_back(b);
        if window.len() > k - 1 {
            let old = window.pop_front().expect("window nonempty");
            for (w, x) in window_sum.iter_mut().zip(&old) {
                *w -= x;
            }
        }
    }
    debug_assert!(total[n - 1].is_one(), "beta_n must be 1");
    Ok(BetaVector { k, n, betas: total })
}

/// Right-to-left construction: beta_n = 1, then
/// beta_j = 1 + beta_{j+1} + ... + beta_{j+k-1} down to j = k-2, then for
/// k >= 4 the low tail beta_j = 1 + beta_{j+1} + (beta_k + ... + beta_{j+k-1})
/// down to j = 1. Subscripts above n read as zero. Both phases slide a window
/// sum, so the whole vector costs O(n) big-integer additions.
pub fn beta_backward(k: usize, n: usize) -> Result<BetaVector> {
    check_domain(k, n)?;
    let mut betas = vec![BigUint::zero(); n];
    betas[n - 1] = BigUint::one();

    // Phase one: j = n-1 down to k-2. `upper_sum` tracks
    // beta_{j+1} + ... + beta_{j+k-1} for the j about to be filled.
    let mut upper_sum = BigUint::one();
    let low = k - 2; // >= 1 in the valid domain
    let mut j = n - 1;
    loop {
        if j < low {
            break;
        }
        let bj = &upper_sum + 1u32;
        // slide the window from (j+1..=j+k-1) to (j..=j+k-2)
        upper_sum += &bj;
        if j + k - 1 <= n {
            upper_sum -= betas[j + k - 2].clone();
        }
        betas[j - 1] = bj;
        if j == low {
            break;
        }
        j -= 1;
    }

    // Phase two, only for k >= 4: the window's lower edge pins at k.
    if k >= 4 {
        let mut tail_sum: BigUint = (k..=(2 * k - 4).min(n)).map(|r| betas[r - 1].clone()).sum();
        for j in (1..=k - 3).rev() {
            let bj = &betas[j] + &tail_sum + 1u32;
            if j + k - 1 <= n {
                tail_sum -= betas[j + k - 2].clone();
            }
            betas[j - 1] = bj;
        }
    }

    Ok(BetaVector { k, n, betas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn betas_u64(v: &BetaVector) -> Vec<u64> {
        v.as_slice()
            .iter()
            .map(|b| u64::try_from(b).expect("fits"))
            .collect()
    }

    #[test]
    fn forward_hand_checked_values() {
        assert_eq!(betas_u64(&beta_forward(3, 3).unwrap()), vec![4, 2, 1]);
        assert_eq!(betas_u64(&beta_forward(3, 4).unwrap()), vec![7, 4, 2, 1]);
        assert_eq!(betas_u64(&beta_forward(4, 4).unwrap()), vec![6, 4, 2, 1]);
    }

    #[test]
    fn backward_hand_checked_values() {
        assert_eq!(betas_u64(&beta_backward(3, 3).unwrap()), vec![4, 2, 1]);
        assert_eq!(betas_u64(&beta_backward(3, 4).unwrap()), vec![7, 4, 2, 1]);
        assert_eq!(betas_u64(&beta_backward(4, 4).unwrap()), vec![6, 4, 2, 1]);
        assert_eq!(
            betas_u64(&beta_backward(5, 8).unwrap()),
            vec![53, 44, 31, 16, 8, 4, 2, 1]
        );
    }

    #[test]
    fn both_routes_agree_on_a_broad_grid() {
        for n in 3..=60 {
            for k in 3..=n {
                assert_eq!(
                    beta_forward(k, n).unwrap(),
                    beta_backward(k, n).unwrap(),
                    "mismatch at k={k}, n={n}"
                );
            }
        }
    }

    #[test]
    fn betas_strictly_decrease_and_end_at_one() {
        for &(k, n) in &[(3usize, 12usize), (4, 9), (7, 7), (5, 20)] {
            let v = beta_backward(k, n).unwrap();
            assert!(v.beta(n).is_one());
            for r in 1..n {
                assert!(v.beta(r) > v.beta(r + 1), "beta must decrease at r={r}");
            }
        }
    }

    #[test]
    fn domain_violations_are_rejected() {
        assert_eq!(
            beta_forward(2, 5).unwrap_err(),
            Error::InvalidDomain { k: 2, n: 5 }
        );
        assert_eq!(
            beta_backward(6, 5).unwrap_err(),
            Error::InvalidDomain { k: 6, n: 5 }
        );
    }
}
