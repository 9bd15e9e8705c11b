//! Brute-force check of the counting rule.
//!
//! Solves `max sum x_s` subject to `sum m_s x_s <= beta`, `0 <= x_s <= cap_s`
//! by enumerating candidate vertices. With one budget row and box bounds an
//! optimal vertex has at most one coordinate strictly inside its box, so it
//! suffices to fix every other coordinate at 0 or at its cap and push the
//! remaining one as far as the budget allows. Exponential in the number of
//! shelves; never uses the greedy order.

use crate::counting::{compute_l, compute_n_star, ProblemSpec};
use crate::error::BoundError;
use crate::rational::Rational;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationInstance {
    pub prices: Vec<i64>,
    pub caps: Vec<Rational>,
    pub budget: i64,
}

impl AllocationInstance {
    pub fn new(prices: Vec<i64>, caps: Vec<Rational>, budget: i64) -> Self {
        AllocationInstance {
            prices,
            caps,
            budget,
        }
    }

    pub fn from_integers(prices: &[i64], caps: &[i64], budget: i64) -> Self {
        AllocationInstance::new(
            prices.to_vec(),
            caps.iter().map(|&c| Rational::from(c)).collect(),
            budget,
        )
    }
}

pub fn oracle_max_purchase(inst: &AllocationInstance) -> Result<Rational, BoundError> {
    oracle_max_purchase_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
}

pub fn oracle_max_purchase_with_limit(
    inst: &AllocationInstance,
    limit: usize,
) -> Result<Rational, BoundError> {
    let count = inst.prices.len();
    if count > limit {
        return Err(BoundError::InstanceTooLarge { count, limit });
    }
    assert_eq!(count, inst.caps.len(), "prices and caps differ in length");

    let budget = Rational::from(inst.budget);
    let prices: Vec<Rational> = inst.prices.iter().map(|&m| Rational::from(m)).collect();

    // all-zero point
    let mut best = Rational::zero();

    // all-cap point
    let full_cost: Rational = prices.iter().zip(&inst.caps).map(|(m, c)| m * c).sum();
    if full_cost <= budget {
        best = best.max(inst.caps.iter().cloned().sum());
    }

    // subsets of shelves bought in full, built up one low bit at a time
    let size = 1usize << count;
    let mut cost = vec![Rational::zero(); size];
    let mut items = vec![Rational::zero(); size];
    for mask in 1..size {
        let s = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        cost[mask] = &cost[rest] + &(&prices[s] * &inst.caps[s]);
        items[mask] = &items[rest] + &inst.caps[s];
    }
    for mask in 0..size {
        if cost[mask] > budget {
            continue;
        }
        let left = &budget - &cost[mask];
        for free in (0..count).filter(|&s| mask >> s & 1 == 0) {
            let x = (&left / &prices[free]).min(inst.caps[free].clone());
            let total = &items[mask] + &x;
            if total > best {
                best = total;
            }
        }
    }
    Ok(best)
}

fn instance_for(spec: &ProblemSpec) -> Result<AllocationInstance, BoundError> {
    let l = compute_l(spec)?;
    let n_star = compute_n_star(spec, l)?;
    let prices = spec
        .shelves
        .prefix(l)
        .iter()
        .map(|s| s.price)
        .collect::<Vec<_>>();
    Ok(AllocationInstance::new(
        prices,
        n_star.iter().map(|&n| Rational::from(n)).collect(),
        spec.budget,
    ))
}

/// `r/2` plus half the brute-force optimum on `(m_1..m_L, n*, beta)`.
pub fn oracle_bound(spec: &ProblemSpec) -> Result<Rational, BoundError> {
    let inst = instance_for(spec)?;
    let best = oracle_max_purchase(&inst)?;
    Ok(Rational::new(spec.rank, 2) + best / Rational::from(2))
}

/// 2 when some prefix of shelves at capped inventories costs exactly `beta`.
pub fn oracle_multiplicity(spec: &ProblemSpec) -> Result<u8, BoundError> {
    let l = compute_l(spec)?;
    let n_star = compute_n_star(spec, l)?;
    let prices: Vec<i64> = spec.shelves.prefix(l).iter().map(|s| s.price).collect();
    let hit = (1..=l).any(|k| {
        let cost: i128 = (0..k).map(|s| prices[s] as i128 * n_star[s] as i128).sum();
        cost == spec.budget as i128
    });
    Ok(if hit { 2 } else { 1 })
}
