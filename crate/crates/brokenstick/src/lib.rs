//! Probabilities for the broken stick: cut a unit stick at n-1 uniform
//! random points and ask which k-subsets of the n pieces can close into a
//! k-gon. Everything is computed twice on purpose: exact big-rational
//! formulas on one side, and Monte Carlo simulation plus brute-force subset
//! enumeration on the other, with the identities between the routes checked
//! by an acceptance suite.
//!
//! Layout:
//! - [`beta`]: the integer recursions behind the no-k-gon probability
//! - [`exact`]: exact rational (and log-domain float) probability formulas
//! - [`reconcile`]: an independent sequence system and its cross-identities
//! - [`sim`]: seedable, splittable, parallel Monte Carlo estimation
//! - [`oracle`]: brute-force subset enumeration ground truth
//! - [`selftest`]: the pinned acceptance grid shared with the CLI
//! - [`rational`]: big-rational helpers, including exact decimal rendering

pub mod beta;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod rational;
pub mod reconcile;
pub mod selftest;
pub mod sim;

pub use beta::{beta_backward, beta_forward, BetaVector};
pub use error::{Error, Result};
pub use exact::{
    expected_bad_subsets, prob_all_exact, prob_none_exact, prob_none_float, prob_not_all_exact,
    prob_random_subset, FloatProb, TermCoefficients,
};
pub use num_rational::BigRational;
pub use oracle::{
    count_bad_subsets, enumerate_subsets, enumerate_subsets_with_budget, kgon_feasible,
    no_kgon_bruteforce, SubsetChoice, SubsetIter, DEFAULT_SUBSET_BUDGET,
};
pub use reconcile::{
    build_sequences, check_simplified_recursions, prob_none_verreault, reconcile_report,
    verify_sequences, ReconcileReport, ReconcileSequences,
};
pub use sim::{
    all_kgon_event, break_stick, break_stick_exponential, break_stick_from_cuts,
    break_stick_from_exponentials, estimate_mean_bad_subsets, estimate_probability,
    estimate_probability_with_generator, no_kgon_event, random_subset_event, wilson_interval,
    Estimate, Event, Generator, MeanEstimate, StickSample,
};
