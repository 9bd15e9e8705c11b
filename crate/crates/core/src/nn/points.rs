use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::{binom, ActivationSupport, NetworkShape, NnError};
use crate::counting::{compute_bound, BoundResult, ProblemSpec, Shelf, ShelfSequence};
use crate::rational::Rational;

/// Caveat attached to every network bound: the counting rule's
/// independence hypotheses are taken as given, not checked.
pub const INDEPENDENCE_NOTE: &str = "assumes linear independence of the expansion terms at this point; \
     input weights that are nonzero and pairwise distinct up to sign suffice for non-polynomial activations";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    /// Redundant units with zero input and output weights.
    P1,
    /// Redundant units copying the input weights of the last true unit.
    P2,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Point::P1 => "P1",
            Point::P2 => "P2",
        })
    }
}

/// Specialized formula value with the shelf indices it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub lambda: Rational,
    pub l: usize,
    pub k: usize,
}

fn saturating_i64(v: &BigUint) -> i64 {
    v.to_i64().unwrap_or(i64::MAX)
}

/// Number of degree-`m` monomials in `n` variables: `C(m + n - 1, m)`.
fn monomials(degree: u64, vars: u64) -> BigUint {
    binom(degree + vars - 1, degree)
}

/// Counting-rule input at P1: `m_s` from the activation, `n_s = M C(m_s+N-1, m_s)`.
pub fn shelves_p1(
    shape: &NetworkShape,
    support: &ActivationSupport,
) -> Result<ProblemSpec, NnError> {
    support.check_polynomial()?;
    let (r, alpha, beta) = shape.counting_params();
    let (n, m) = (shape.inputs, shape.outputs);
    let shelves = match support {
        ActivationSupport::Polynomial(exponents) => {
            if shape.true_hidden > 0 {
                return Err(NnError::PolynomialWithHiddenUnits(shape.true_hidden));
            }
            let list = exponents
                .iter()
                .map(|&deg| Shelf::new(deg as i64, saturating_i64(&(monomials(deg, n) * m))))
                .collect();
            ShelfSequence::Finite(list)
        }
        other => {
            let support = other.clone();
            ShelfSequence::infinite(move |s| {
                let deg = support
                    .exponent(s)
                    .expect("non-polynomial support is infinite");
                Shelf::new(deg as i64, saturating_i64(&(monomials(deg, n) * m)))
            })
        }
    };
    Ok(ProblemSpec::new(r, alpha, beta, shelves))
}

/// Counting-rule input at P2: `m_s = s`, `n_s = M C(s+N-1, s) - N [s = 1]`.
pub fn shelves_p2(shape: &NetworkShape) -> Result<ProblemSpec, NnError> {
    if shape.true_hidden == 0 {
        return Err(NnError::P2RequiresTrueUnits);
    }
    let (r, alpha, beta) = shape.counting_params();
    let (n, m) = (shape.inputs, shape.outputs);
    let shelves = ShelfSequence::infinite(move |s| {
        let s = s as u64;
        let count = monomials(s, n) * m;
        let count = if s == 1 { count - n } else { count };
        Shelf::new(s as i64, saturating_i64(&count))
    });
    Ok(ProblemSpec::new(r, alpha, beta, shelves))
}

/// Closed form at P1, written in binomial counts.
///
/// `K` is taken with the last shelf at its capped count, which is what the
/// generic rule does; counting the full `L`-th shelf would let the middle
/// formula overshoot `M (H-H*) / 2` when the budget covers the capped demand
/// but not the uncapped one.
pub fn closed_form_p1(
    shape: &NetworkShape,
    support: &ActivationSupport,
) -> Result<ClosedForm, NnError> {
    support.check_polynomial()?;
    if support.is_polynomial() && shape.true_hidden > 0 {
        return Err(NnError::PolynomialWithHiddenUnits(shape.true_hidden));
    }
    let n = shape.inputs;
    let m = BigInt::from(shape.outputs);
    let d = BigInt::from(shape.redundant());
    let budget = BigInt::from(shape.inputs) * &d;

    // per-output monomial counts until their sum reaches H - H*
    let mut degrees: Vec<u64> = Vec::new();
    let mut counts: Vec<BigInt> = Vec::new();
    let mut cum = BigInt::zero();
    let mut s = 1;
    while let Some(deg) = support.exponent(s) {
        let c = BigInt::from(monomials(deg, n));
        degrees.push(deg);
        cum += &c;
        counts.push(c);
        if cum >= d {
            break;
        }
        s += 1;
    }
    let l = degrees.len();
    let before_last: BigInt = counts[..l - 1].iter().sum();
    let mut capped = counts.clone();
    capped[l - 1] = counts[l - 1].clone().min(&d - &before_last);

    let mut k = 0;
    let mut cost = BigInt::zero();
    for s in 0..l {
        cost += &m * BigInt::from(degrees[s]) * &capped[s];
        if cost > budget {
            break;
        }
        k += 1;
    }

    let half_rank = Rational::new((shape.outputs + shape.inputs) * shape.true_hidden, 2);
    let excess = if k == 0 {
        Rational::new(budget, BigInt::from(2 * degrees[0]))
    } else if k < l {
        let next = BigInt::from(degrees[k]);
        let lifted: BigInt = (0..k)
            .map(|s| &counts[s] * (&next - BigInt::from(degrees[s])))
            .sum();
        Rational::new(budget + &m * lifted, 2 * next)
    } else {
        let total: BigInt = capped.iter().sum();
        Rational::new(&m * total, 2)
    };
    Ok(ClosedForm {
        lambda: half_rank + excess,
        l,
        k,
    })
}

/// `L = min { l : M C(N+l, l) >= M (H-H*+1) + N }`.
pub fn p2_simplified_l(shape: &NetworkShape) -> usize {
    let (n, m) = (shape.inputs, BigUint::from(shape.outputs));
    let target = &m * (shape.redundant() + 1) + n;
    (1u64..)
        .find(|&l| &m * binom(n + l, l) >= target)
        .expect("binomials grow without bound") as usize
}

/// `K = max { k <= L : M C(N+k, N+1) <= H-H*+1 }`, counting the `L`-th shelf
/// at full inventory.
pub fn p2_simplified_k(shape: &NetworkShape, l: usize) -> usize {
    let (n, m) = (shape.inputs, BigUint::from(shape.outputs));
    let limit = BigUint::from(shape.redundant() + 1);
    (0..=l as u64)
        .take_while(|&k| &m * binom(n + k, n + 1) <= limit)
        .last()
        .unwrap_or(0) as usize
}

/// Closed form at P2.
///
/// Uses the simplified `L` and `K`, except that `K = L` whenever the capped
/// demand `M (H-H*)` is affordable (see [`closed_form_p1`]).
pub fn closed_form_p2(shape: &NetworkShape) -> Result<ClosedForm, NnError> {
    if shape.true_hidden == 0 {
        return Err(NnError::P2RequiresTrueUnits);
    }
    let n = shape.inputs;
    let big_n = BigInt::from(n);
    let m = BigInt::from(shape.outputs);
    let d = BigInt::from(shape.redundant());
    let bin = |a: u64, b: u64| BigInt::from(binom(a, b));

    let l = p2_simplified_l(shape);
    let mut k = p2_simplified_k(shape, l);

    if k < l {
        let l64 = l as u64;
        // inventory and cost of shelves 1..L-1 in closed form
        let (stock_before, cost_before) = if l >= 2 {
            (
                &m * (bin(n + l64 - 1, l64 - 1) - 1) - &big_n,
                &m * &big_n * bin(n + l64 - 1, n + 1) - &big_n,
            )
        } else {
            (BigInt::zero(), BigInt::zero())
        };
        let last = &m * &d - stock_before;
        if cost_before + BigInt::from(l64) * last <= &big_n * &d {
            k = l;
        }
    }

    let half_rank = Rational::new((shape.outputs + shape.inputs) * shape.true_hidden, 2);
    let excess = if k == 0 {
        Rational::new(&big_n * &d, 2)
    } else if k < l {
        let k64 = k as u64;
        let numer = &big_n * (&d - BigInt::from(k64))
            + &m * (bin(n + k64 + 1, k64) - BigInt::from(k64 + 1));
        Rational::new(numer, BigInt::from(2 * (k64 + 1)))
    } else {
        Rational::new(&m * &d, 2)
    };
    Ok(ClosedForm {
        lambda: half_rank + excess,
        l,
        k,
    })
}

fn reconcile(closed: ClosedForm, pipeline: BoundResult) -> Result<BoundResult, NnError> {
    if closed.lambda != pipeline.lambda_bound || closed.l != pipeline.l || closed.k != pipeline.k {
        return Err(NnError::InternalInconsistency {
            closed_form: closed.lambda,
            pipeline: pipeline.lambda_bound,
        });
    }
    Ok(pipeline)
}

/// Bound at P1; the closed form and the generic rule must agree.
pub fn bound_p1(shape: &NetworkShape, support: &ActivationSupport) -> Result<BoundResult, NnError> {
    let spec = shelves_p1(shape, support)?;
    let pipeline = compute_bound(&spec)?;
    reconcile(closed_form_p1(shape, support)?, pipeline)
}

/// Bound at P2; the closed form and the generic rule must agree.
pub fn bound_p2(shape: &NetworkShape) -> Result<BoundResult, NnError> {
    let spec = shelves_p2(shape)?;
    let pipeline = compute_bound(&spec)?;
    reconcile(closed_form_p2(shape)?, pipeline)
}

pub fn bound_point(
    shape: &NetworkShape,
    support: &ActivationSupport,
    point: Point,
) -> Result<BoundResult, NnError> {
    match point {
        Point::P1 => bound_p1(shape, support),
        Point::P2 => bound_p2(shape),
    }
}
