//! The budgeted counting rule.
//!
//! A problem is a shop: shelf `s` holds `n_s` items at unit price `m_s`
//! (prices strictly increasing), the buyer wants at most `alpha` items and
//! has budget `beta`. Twice the excess of the bound over `r/2` is the largest
//! number of items that can be bought when fractional purchases are allowed,
//! shelf by shelf from the cheapest.
//!
//! Shelf indices in this module are 1-based wherever they are exposed
//! (`L`, `K`), matching the usual notation; vectors are 0-based.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::BoundError;
use crate::rational::Rational;

/// Default number of shelves an infinite family may materialize before the
/// computation gives up with [`BoundError::ShelfCapExceeded`].
pub const DEFAULT_HARD_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shelf {
    /// Unit price: the lowest degree in `b` of the shelf's terms.
    #[serde(rename = "m")]
    pub price: i64,
    /// Number of linearly independent terms on the shelf. May be zero.
    #[serde(rename = "n")]
    pub inventory: i64,
}

impl Shelf {
    pub const fn new(price: i64, inventory: i64) -> Self {
        Shelf { price, inventory }
    }
}

/// Maps a 1-based shelf index to its shelf. Must be deterministic.
pub type ShelfGenerator = Arc<dyn Fn(usize) -> Shelf + Send + Sync>;

#[derive(Clone)]
pub enum ShelfSequence {
    Finite(Vec<Shelf>),
    Infinite {
        generator: ShelfGenerator,
        hard_cap: usize,
    },
}

impl ShelfSequence {
    pub fn infinite<F>(generator: F) -> Self
    where
        F: Fn(usize) -> Shelf + Send + Sync + 'static,
    {
        ShelfSequence::Infinite {
            generator: Arc::new(generator),
            hard_cap: DEFAULT_HARD_CAP,
        }
    }

    pub fn with_hard_cap(self, cap: usize) -> Self {
        match self {
            ShelfSequence::Infinite { generator, .. } => ShelfSequence::Infinite {
                generator,
                hard_cap: cap.max(1),
            },
            finite => finite,
        }
    }

    /// The `s`-th shelf (1-based), or `None` past the end of a finite list.
    pub fn shelf(&self, s: usize) -> Option<Shelf> {
        if s == 0 {
            return None;
        }
        match self {
            ShelfSequence::Finite(list) => list.get(s - 1).copied(),
            ShelfSequence::Infinite { generator, .. } => Some(generator(s)),
        }
    }

    /// `gamma` for a finite list, `None` for an infinite family.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            ShelfSequence::Finite(list) => Some(list.len()),
            ShelfSequence::Infinite { .. } => None,
        }
    }

    /// Number of shelves that may be materialized.
    fn limit(&self) -> usize {
        match self {
            ShelfSequence::Finite(list) => list.len(),
            ShelfSequence::Infinite { hard_cap, .. } => *hard_cap,
        }
    }

    /// The first `count` shelves (fewer if the list is shorter).
    pub fn prefix(&self, count: usize) -> Vec<Shelf> {
        (1..=count.min(self.limit()))
            .map_while(|s| self.shelf(s))
            .collect()
    }
}

impl fmt::Debug for ShelfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShelfSequence::Finite(list) => f.debug_tuple("Finite").field(list).finish(),
            ShelfSequence::Infinite { hard_cap, .. } => f
                .debug_struct("Infinite")
                .field("head", &self.prefix(4))
                .field("hard_cap", hard_cap)
                .finish_non_exhaustive(),
        }
    }
}

/// Input tuple of the counting rule.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    /// `r`: rank of the Fisher information matrix at the point.
    pub rank: i64,
    /// `alpha`: number of `a` parameters (the demand).
    pub demand: i64,
    /// `beta`: number of `b` parameters (the budget).
    pub budget: i64,
    pub shelves: ShelfSequence,
}

impl ProblemSpec {
    pub fn new(rank: i64, demand: i64, budget: i64, shelves: ShelfSequence) -> Self {
        ProblemSpec {
            rank,
            demand,
            budget,
            shelves,
        }
    }

    /// Finite spec from `(m, n)` pairs.
    pub fn finite(rank: i64, demand: i64, budget: i64, shelves: &[(i64, i64)]) -> Self {
        let list = shelves.iter().map(|&(m, n)| Shelf::new(m, n)).collect();
        ProblemSpec::new(rank, demand, budget, ShelfSequence::Finite(list))
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        if self.rank < 0 {
            return Err(BoundError::NegativeRank(self.rank));
        }
        if self.demand < 1 {
            return Err(BoundError::NonPositiveDemand(self.demand));
        }
        if self.budget < 1 {
            return Err(BoundError::NonPositiveBudget(self.budget));
        }
        match &self.shelves {
            ShelfSequence::Finite(list) => {
                if list.is_empty() {
                    return Err(BoundError::NoShelves);
                }
                let mut walker = ShelfWalker::default();
                for shelf in list {
                    walker.push(*shelf)?;
                }
            }
            ShelfSequence::Infinite { .. } => {
                // only the head is checked eagerly; the rest is checked as it
                // is materialized
                let first = self.shelves.shelf(1).ok_or(BoundError::NoShelves)?;
                ShelfWalker::default().push(first)?;
            }
        }
        Ok(())
    }
}

/// Checks shelves one at a time as they are materialized.
#[derive(Default)]
struct ShelfWalker {
    index: usize,
    last_price: Option<i64>,
}

impl ShelfWalker {
    fn push(&mut self, shelf: Shelf) -> Result<(), BoundError> {
        self.index += 1;
        if self.index == 1 && shelf.price < 1 {
            return Err(BoundError::NonPositivePrice(shelf.price));
        }
        if let Some(prev) = self.last_price {
            if shelf.price <= prev {
                return Err(BoundError::NonIncreasingPrices {
                    index: self.index,
                    previous: prev,
                    current: shelf.price,
                });
            }
        }
        if shelf.inventory < 0 {
            return Err(BoundError::NegativeInventory {
                index: self.index,
                value: shelf.inventory,
            });
        }
        self.last_price = Some(shelf.price);
        Ok(())
    }
}

/// Returns the spec unchanged if it satisfies the counting rule's hypotheses.
pub fn validate_spec(spec: ProblemSpec) -> Result<ProblemSpec, BoundError> {
    spec.validate()?;
    Ok(spec)
}

/// Materializes shelves up to the stopping index `L`, validating each one.
fn walk_to_stop(spec: &ProblemSpec) -> Result<Vec<Shelf>, BoundError> {
    spec.validate()?;
    let limit = spec.shelves.limit();
    let demand = spec.demand as i128;
    let mut walker = ShelfWalker::default();
    let mut taken = Vec::new();
    let mut stock: i128 = 0;
    for s in 1..=limit {
        let Some(shelf) = spec.shelves.shelf(s) else {
            break;
        };
        walker.push(shelf)?;
        taken.push(shelf);
        stock += shelf.inventory as i128;
        if stock >= demand {
            return Ok(taken);
        }
    }
    match spec.shelves {
        ShelfSequence::Finite(_) => Ok(taken),
        ShelfSequence::Infinite { hard_cap, .. } => Err(BoundError::ShelfCapExceeded {
            cap: hard_cap,
            demand: spec.demand,
            reached: stock.min(i64::MAX as i128) as i64,
        }),
    }
}

/// `L`: the first shelf at which cumulative inventory reaches the demand, or
/// `gamma` when the whole (finite) shop falls short.
pub fn compute_l(spec: &ProblemSpec) -> Result<usize, BoundError> {
    walk_to_stop(spec).map(|shelves| shelves.len())
}

fn cap_inventories(shelves: &[Shelf], demand: i64) -> Vec<i64> {
    let mut remaining = demand;
    let last = shelves.len().saturating_sub(1);
    shelves
        .iter()
        .enumerate()
        .map(|(i, shelf)| {
            let take = if i < last {
                shelf.inventory
            } else {
                shelf.inventory.min(remaining)
            };
            remaining -= take;
            take
        })
        .collect()
}

/// `n*`: inventories of shelves `1..=l`, with the last one capped at the
/// demand still unmet after the earlier shelves.
pub fn compute_n_star(spec: &ProblemSpec, l: usize) -> Result<Vec<i64>, BoundError> {
    spec.validate()?;
    let shelves = spec.shelves.prefix(l);
    if shelves.len() != l || l == 0 {
        return Err(BoundError::ShelfIndexOutOfRange { index: l });
    }
    Ok(cap_inventories(&shelves, spec.demand))
}

/// Largest `k` whose first `k` shelves (at capped inventories) cost at most
/// the budget. Also reports whether some `k >= 1` spends the budget exactly.
fn count_full_shelves(prices: &[i64], n_star: &[i64], budget: i64) -> (usize, bool) {
    let budget = budget as i128;
    let mut spent: i128 = 0;
    let mut exact = false;
    for (k, (&m, &n)) in prices.iter().zip(n_star).enumerate() {
        spent += m as i128 * n as i128;
        if spent > budget {
            return (k, exact);
        }
        exact |= spent == budget;
    }
    (n_star.len(), exact)
}

/// `K`: number of leading shelves that can be bought out within the budget.
pub fn compute_k(spec: &ProblemSpec, n_star: &[i64]) -> Result<usize, BoundError> {
    spec.validate()?;
    let prices: Vec<i64> = spec
        .shelves
        .prefix(n_star.len())
        .iter()
        .map(|s| s.price)
        .collect();
    if prices.len() != n_star.len() {
        return Err(BoundError::ShelfIndexOutOfRange {
            index: n_star.len(),
        });
    }
    Ok(count_full_shelves(&prices, n_star, spec.budget).0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundCase {
    /// `K = 0`: the budget runs out on the first shelf.
    BudgetExhaustedOnFirstShelf,
    /// `1 <= K <= L-1`.
    Middle,
    /// `K = L`: the whole (capped) demand is affordable.
    AllDemandMet,
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoundCase::BudgetExhaustedOnFirstShelf => "BudgetExhaustedOnFirstShelf",
            BoundCase::Middle => "Middle",
            BoundCase::AllDemandMet => "AllDemandMet",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub lambda_bound: Rational,
    /// 1 or 2.
    pub multiplicity: u8,
    pub l: usize,
    pub k: usize,
    pub n_star: Vec<i64>,
    /// Prices of shelves `1..=L`.
    pub prices: Vec<i64>,
    pub case: BoundCase,
}

/// Excess over `r/2` for `1 <= k <= L-1`:
/// `(beta + sum_{s<=k} (m_{k+1} - m_s) n*_s) / (2 m_{k+1})`.
pub(crate) fn middle_case_excess(
    prices: &[i64],
    n_star: &[i64],
    budget: i64,
    k: usize,
) -> Rational {
    let next = prices[k] as i128;
    let lifted: i128 = prices[..k]
        .iter()
        .zip(&n_star[..k])
        .map(|(&m, &n)| (next - m as i128) * n as i128)
        .sum();
    Rational::new(budget as i128 + lifted, 2 * next)
}

/// Evaluates the three-case bound and its multiplicity.
pub fn compute_bound(spec: &ProblemSpec) -> Result<BoundResult, BoundError> {
    let shelves = walk_to_stop(spec)?;
    let l = shelves.len();
    let prices: Vec<i64> = shelves.iter().map(|s| s.price).collect();
    let n_star = cap_inventories(&shelves, spec.demand);
    let (k, exact) = count_full_shelves(&prices, &n_star, spec.budget);

    let case = if k == 0 {
        BoundCase::BudgetExhaustedOnFirstShelf
    } else if k < l {
        BoundCase::Middle
    } else {
        BoundCase::AllDemandMet
    };
    let excess = match case {
        BoundCase::BudgetExhaustedOnFirstShelf => Rational::new(spec.budget, 2 * prices[0]),
        BoundCase::Middle => middle_case_excess(&prices, &n_star, spec.budget, k),
        BoundCase::AllDemandMet => {
            Rational::new(n_star.iter().map(|&n| n as i128).sum::<i128>(), 2)
        }
    };
    Ok(BoundResult {
        lambda_bound: Rational::new(spec.rank, 2) + excess,
        multiplicity: if exact { 2 } else { 1 },
        l,
        k,
        n_star,
        prices,
        case,
    })
}

/// Inserts an empty shelf before the shelf at 0-based `position` (or at the
/// end when `position == gamma`). Its price is the smallest integer above the
/// left neighbour (1 at the front) that stays below the right neighbour.
pub fn insert_empty_shelf(spec: &ProblemSpec, position: usize) -> Result<ProblemSpec, BoundError> {
    let ShelfSequence::Finite(list) = &spec.shelves else {
        return Err(BoundError::NotFinite);
    };
    if position > list.len() {
        return Err(BoundError::ShelfIndexOutOfRange { index: position });
    }
    let left = if position == 0 {
        0
    } else {
        list[position - 1].price
    };
    let price = left + 1;
    if let Some(right) = list.get(position) {
        if price >= right.price {
            return Err(BoundError::NoIntegerPriceInGap {
                left,
                right: right.price,
            });
        }
    }
    let mut shelves = list.clone();
    shelves.insert(position, Shelf::new(price, 0));
    Ok(ProblemSpec {
        shelves: ShelfSequence::Finite(shelves),
        ..spec.clone()
    })
}
