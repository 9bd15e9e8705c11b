use std::fmt;

use super::points::{bound_p1, bound_p2};
use super::{ActivationSupport, NetworkShape, NnError};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    P1,
    P2,
    Equal,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub p1: Rational,
    pub p2: Rational,
    /// `p1 - p2`.
    pub difference: Rational,
    /// The point with the smaller bound.
    pub winner: Winner,
}

pub fn compare_p1_p2(
    shape: &NetworkShape,
    support: &ActivationSupport,
) -> Result<Comparison, NnError> {
    if support.is_polynomial() {
        return Err(NnError::PolynomialActivation);
    }
    if shape.true_hidden == 0 {
        return Err(NnError::P2RequiresTrueUnits);
    }
    let p1 = bound_p1(shape, support)?.lambda_bound;
    let p2 = bound_p2(shape)?.lambda_bound;
    let winner = match p1.cmp(&p2) {
        std::cmp::Ordering::Less => Winner::P1,
        std::cmp::Ordering::Greater => Winner::P2,
        std::cmp::Ordering::Equal => Winner::Equal,
    };
    Ok(Comparison {
        difference: &p1 - &p2,
        p1,
        p2,
        winner,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    /// `H - H*`.
    pub redundant: u64,
    pub comparison: Comparison,
}

impl ComparisonRow {
    /// P2's bound is no larger than P1's.
    pub fn p2_preferred(&self) -> bool {
        self.comparison.p2 <= self.comparison.p1
    }
}

/// Both bounds for `H - H* = 1..=scan_max` at fixed `(N, M, H*)`.
pub fn scan_comparison(
    support: &ActivationSupport,
    inputs: u64,
    outputs: u64,
    true_hidden: u64,
    scan_max: u64,
) -> Result<Vec<ComparisonRow>, NnError> {
    (1..=scan_max)
        .map(|redundant| {
            let shape = NetworkShape::new(inputs, true_hidden + redundant, outputs, true_hidden)?;
            Ok(ComparisonRow {
                redundant,
                comparison: compare_p1_p2(&shape, support)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossoverScan {
    pub rows: Vec<ComparisonRow>,
    /// Largest `H - H*` at which P2's bound is no larger than P1's.
    pub threshold: u64,
    /// Largest `H - H*` at which P2's bound is strictly smaller. Any value
    /// in `strict_threshold..=threshold` separates the two regimes when the
    /// bounds tie in between.
    pub strict_threshold: Option<u64>,
    /// Number of times the preference changes along the scan. A single
    /// change means a clean crossover; more is reported, not rejected.
    pub flips: usize,
}

impl CrossoverScan {
    pub fn is_monotone(&self) -> bool {
        self.flips == 1
    }
}

/// Crossover for a single input unit.
pub fn crossover_threshold(
    outputs: u64,
    support: &ActivationSupport,
    true_hidden: u64,
    scan_max: u64,
) -> Result<CrossoverScan, NnError> {
    crossover_threshold_with_inputs(1, outputs, support, true_hidden, scan_max)
}

pub fn crossover_threshold_with_inputs(
    inputs: u64,
    outputs: u64,
    support: &ActivationSupport,
    true_hidden: u64,
    scan_max: u64,
) -> Result<CrossoverScan, NnError> {
    let rows = scan_comparison(support, inputs, outputs, true_hidden, scan_max)?;
    let flips = rows
        .windows(2)
        .filter(|w| w[0].p2_preferred() != w[1].p2_preferred())
        .count();
    let threshold = rows
        .iter()
        .rev()
        .find(|row| row.p2_preferred())
        .map(|row| row.redundant);
    let strict_threshold = rows
        .iter()
        .rev()
        .find(|row| row.comparison.winner == Winner::P2)
        .map(|row| row.redundant);
    match threshold {
        // preferred all the way to the end: the crossover lies beyond the scan
        Some(t) if t < scan_max => Ok(CrossoverScan {
            rows,
            threshold: t,
            strict_threshold,
            flips,
        }),
        _ => Err(NnError::NotFoundWithin(scan_max)),
    }
}
