use thiserror::Error;

/// Failure modes shared across the exact, simulation, and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: need 3 <= k <= n, got k={k}, n={n}")]
    InvalidDomain { k: usize, n: usize },
    #[error("need at least 3 lengths for a polygon test, got {got}")]
    TooFewLengths { got: usize },
    #[error("length at index {index} must be positive and finite")]
    NonPositiveLength { index: usize },
    #[error("piece lengths must sum to 1 within 1e-12, got {sum}")]
    BadPieceSum { sum: f64 },
    #[error("subset enumeration budget exceeded: C({n},{k}) > {budget}")]
    BudgetExceeded { n: usize, k: usize, budget: u64 },
    #[error("need at least {min} trials")]
    TooFewTrials { min: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Every probability formula here lives on 3 <= k <= n.
pub(crate) fn check_domain(k: usize, n: usize) -> Result<()> {
    if k < 3 || k > n {
        return Err(Error::InvalidDomain { k, n });
    }
    Ok(())
}
