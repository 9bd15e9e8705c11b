//! Seeded randomized agreement harness.
//!
//! Draws random finite specs and checks that the counting rule, the vertex
//! enumeration oracle and the blow-up ledger agree exactly, and that the
//! monotonicity and empty-shelf properties of the rule hold on random pairs.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{compute_bound, insert_empty_shelf, ProblemSpec, Shelf, ShelfSequence};
use crate::error::BoundError;
use crate::ledger::ledger_min;
use crate::oracle::{oracle_bound, oracle_multiplicity, DEFAULT_ENUMERATION_LIMIT};

/// Ranges for random specs. All upper bounds are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecSampler {
    pub max_rank: i64,
    pub max_shelves: usize,
    pub max_price: i64,
    pub max_inventory: i64,
    pub max_demand: i64,
    pub max_budget: i64,
}

impl Default for SpecSampler {
    fn default() -> Self {
        SpecSampler {
            max_rank: 5,
            max_shelves: 6,
            max_price: 12,
            max_inventory: 8,
            max_demand: 30,
            max_budget: 60,
        }
    }
}

impl SpecSampler {
    pub fn with_max_shelves(mut self, max_shelves: usize) -> Self {
        self.max_shelves = max_shelves.max(1);
        self.max_price = self.max_price.max(self.max_shelves as i64);
        self
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ProblemSpec {
        let count = rng.random_range(1..=self.max_shelves);
        let mut prices: Vec<i64> = sample(rng, self.max_price as usize, count)
            .into_iter()
            .map(|i| i as i64 + 1)
            .collect();
        prices.sort_unstable();
        let shelves = prices
            .into_iter()
            .map(|m| Shelf::new(m, rng.random_range(0..=self.max_inventory)))
            .collect();
        ProblemSpec::new(
            rng.random_range(0..=self.max_rank),
            rng.random_range(1..=self.max_demand),
            rng.random_range(1..=self.max_budget),
            ShelfSequence::Finite(shelves),
        )
    }
}

fn finite_shelves(spec: &ProblemSpec) -> &[Shelf] {
    match &spec.shelves {
        ShelfSequence::Finite(list) => list,
        ShelfSequence::Infinite { .. } => panic!("random pairs are built from finite specs"),
    }
}

/// Copy of `spec` with every price raised by a random amount (0..=3),
/// kept strictly increasing.
pub fn raise_prices<R: Rng + ?Sized>(spec: &ProblemSpec, rng: &mut R) -> ProblemSpec {
    let mut last = 0;
    let shelves = finite_shelves(spec)
        .iter()
        .map(|s| {
            let price = (s.price + rng.random_range(0..=3)).max(last + 1);
            last = price;
            Shelf::new(price, s.inventory)
        })
        .collect();
    ProblemSpec {
        shelves: ShelfSequence::Finite(shelves),
        ..spec.clone()
    }
}

/// Copy of `spec` with every inventory raised by a random amount (0..=3).
pub fn raise_inventories<R: Rng + ?Sized>(spec: &ProblemSpec, rng: &mut R) -> ProblemSpec {
    let shelves = finite_shelves(spec)
        .iter()
        .map(|s| Shelf::new(s.price, s.inventory + rng.random_range(0..=3)))
        .collect();
    ProblemSpec {
        shelves: ShelfSequence::Finite(shelves),
        ..spec.clone()
    }
}

/// Inserts an empty shelf at a random position that has room for one.
/// Appending always has room, so this never fails for a valid spec.
pub fn insert_random_empty_shelf<R: Rng + ?Sized>(spec: &ProblemSpec, rng: &mut R) -> ProblemSpec {
    let len = finite_shelves(spec).len();
    let start = rng.random_range(0..=len);
    (0..=len)
        .map(|offset| (start + offset) % (len + 1))
        .find_map(|pos| insert_empty_shelf(spec, pos).ok())
        .expect("appending an empty shelf always succeeds")
}

/// Compact one-line rendering of a finite spec.
pub fn describe_spec(spec: &ProblemSpec) -> String {
    let shelves = match &spec.shelves {
        ShelfSequence::Finite(list) => list
            .iter()
            .map(|s| format!("({},{})", s.price, s.inventory))
            .collect::<Vec<_>>()
            .join(","),
        ShelfSequence::Infinite { .. } => "<infinite>".to_string(),
    };
    format!(
        "r={} alpha={} beta={} shelves=[{}]",
        spec.rank, spec.demand, spec.budget, shelves
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub case: usize,
    pub check: &'static str,
    pub spec: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<Counterexample>,
    /// Cases where "the ledger minimum is attained more than once" and
    /// "multiplicity is 2" disagree. Diagnostic only.
    pub advisory_mismatches: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "cases: {}", self.cases)?;
        writeln!(f, "checks: {}", self.checks)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        for c in &self.failures {
            writeln!(
                f,
                "  FAIL case {} [{}] {} :: {}",
                c.case, c.check, c.spec, c.detail
            )?;
        }
        writeln!(
            f,
            "advisory multiplicity mismatches: {}",
            self.advisory_mismatches.len()
        )?;
        for c in &self.advisory_mismatches {
            writeln!(
                f,
                "  NOTE case {} [{}] {} :: {}",
                c.case, c.check, c.spec, c.detail
            )?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

struct Recorder {
    checks: usize,
    failures: Vec<Counterexample>,
}

impl Recorder {
    fn check(
        &mut self,
        case: usize,
        check: &'static str,
        spec: &ProblemSpec,
        ok: Result<bool, String>,
    ) {
        self.checks += 1;
        let detail = match ok {
            Ok(true) => return,
            Ok(false) => "values disagree".to_string(),
            Err(e) => e,
        };
        self.failures.push(Counterexample {
            case,
            check,
            spec: describe_spec(spec),
            detail,
        });
    }
}

fn show(e: BoundError) -> String {
    e.to_string()
}

/// Runs `cases` random specs drawn with `seed`. Shelf counts are clamped to
/// the oracle's enumeration limit.
pub fn run_verification(cases: usize, seed: u64, max_shelves: usize) -> VerificationReport {
    let sampler =
        SpecSampler::default().with_max_shelves(max_shelves.min(DEFAULT_ENUMERATION_LIMIT));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder {
        checks: 0,
        failures: Vec::new(),
    };
    let mut advisory = Vec::new();

    for case in 0..cases {
        let spec = sampler.sample(&mut rng);
        let bound = match compute_bound(&spec) {
            Ok(b) => b,
            Err(e) => {
                rec.check(case, "compute_bound", &spec, Err(show(e)));
                continue;
            }
        };

        let oracle = oracle_bound(&spec).map_err(show);
        rec.check(
            case,
            "oracle_bound",
            &spec,
            oracle.map(|v| v == bound.lambda_bound),
        );
        let mult = oracle_multiplicity(&spec).map_err(show);
        rec.check(
            case,
            "oracle_multiplicity",
            &spec,
            mult.map(|m| m == bound.multiplicity),
        );
        match ledger_min(&spec) {
            Ok((value, count)) => {
                rec.check(case, "ledger_min", &spec, Ok(value == bound.lambda_bound));
                if (count >= 2) != (bound.multiplicity == 2) {
                    advisory.push(Counterexample {
                        case,
                        check: "ledger_multiplicity",
                        spec: describe_spec(&spec),
                        detail: format!(
                            "minimum attained {count} times, multiplicity {}",
                            bound.multiplicity
                        ),
                    });
                }
            }
            Err(e) => rec.check(case, "ledger_min", &spec, Err(show(e))),
        }

        let pricier = raise_prices(&spec, &mut rng);
        let res = compute_bound(&pricier).map_err(show);
        rec.check(
            case,
            "price_monotonicity",
            &pricier,
            res.map(|b| b.lambda_bound <= bound.lambda_bound),
        );

        let stocked = raise_inventories(&spec, &mut rng);
        let res = compute_bound(&stocked).map_err(show);
        rec.check(
            case,
            "inventory_monotonicity",
            &stocked,
            res.map(|b| b.lambda_bound >= bound.lambda_bound),
        );

        let padded = insert_random_empty_shelf(&spec, &mut rng);
        let res = compute_bound(&padded).map_err(show);
        rec.check(
            case,
            "empty_shelf_invariance",
            &padded,
            res.map(|b| {
                b.lambda_bound == bound.lambda_bound && b.multiplicity == bound.multiplicity
            }),
        );
    }

    VerificationReport {
        seed,
        cases,
        checks: rec.checks,
        failures: rec.failures,
        advisory_mismatches: advisory,
    }
}
