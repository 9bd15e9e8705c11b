//! Shared inputs for the criterion benches.

use lcbound_core::{ProblemSpec, Shelf, ShelfSequence};

/// Prices `1, 3, 5, ...` with one item each, as an infinite family.
pub fn odd_family(rank: i64, demand: i64, budget: i64) -> ProblemSpec {
    ProblemSpec::new(
        rank,
        demand,
        budget,
        ShelfSequence::infinite(|s| Shelf::new(2 * s as i64 - 1, 1)),
    )
}

/// Finite shop with `count` shelves at prices `1, 3, 5, ...` and inventory 2.
pub fn finite_shop(count: usize, demand: i64, budget: i64) -> ProblemSpec {
    let shelves: Vec<(i64, i64)> = (1..=count as i64).map(|s| (2 * s - 1, 2)).collect();
    ProblemSpec::finite(1, demand, budget, &shelves)
}
