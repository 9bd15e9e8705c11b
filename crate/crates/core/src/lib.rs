//! Exact upper bounds for local learning coefficients.
//!
//! The bound comes from a counting rule: items on shelves with strictly
//! increasing unit prices, a demand cap `alpha`, a budget `beta`, and a free
//! allowance `r`. The crate evaluates that rule exactly ([`counting`]),
//! checks it against a brute-force allocation solver ([`oracle`]) and the
//! blow-up exponent ledger ([`ledger`]), and specializes it to three-layer
//! neural networks ([`nn`]).

pub mod counting;
pub mod error;
pub mod ledger;
pub mod nn;
pub mod oracle;
pub mod rational;
pub mod verify;

pub use counting::{
    compute_bound, compute_k, compute_l, compute_n_star, insert_empty_shelf, validate_spec,
    BoundCase, BoundResult, ProblemSpec, Shelf, ShelfSequence, DEFAULT_HARD_CAP,
};
pub use error::BoundError;
pub use ledger::{chart_candidates, ledger_min, ChartCandidate, Depth, Stage};
pub use nn::{ActivationSupport, NetworkShape, NnError, Point};
pub use oracle::{oracle_bound, oracle_max_purchase, oracle_multiplicity, AllocationInstance};
pub use rational::Rational;
