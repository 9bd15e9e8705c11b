//! Exponent bookkeeping of the blow-up sequence.
//!
//! Each blow-up depth `j = 1..=m_L` yields the candidate
//! `(j r + beta + sum_{s <= L, m_s <= j} (j - m_s) n*_s) / (2 j)`, and the
//! final blow-up in `(theta, a)` yields `(r + sum n*_s) / 2`. The bound is the
//! minimum over all of them.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::counting::{compute_l, compute_n_star, ProblemSpec};
use crate::error::BoundError;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Blowup(u64),
    Terminal,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Blowup(j) => write!(f, "{j}"),
            Depth::Terminal => f.write_str("Terminal"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Depth::Blowup(j) => serializer.serialize_u64(*j),
            Depth::Terminal => serializer.serialize_str("Terminal"),
        }
    }
}

/// Which part of the procedure produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Depths `j <= m_1`.
    Initial,
    /// Depths `m_k < j <= m_{k+1}`.
    Shelf(usize),
    /// The last blow-up.
    Final,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Initial => f.write_str("Step1"),
            Stage::Shelf(k) => write!(f, "Step3-{k}"),
            Stage::Final => f.write_str("Step4"),
        }
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartCandidate {
    pub depth: Depth,
    pub value: Rational,
    pub stage: Stage,
}

pub fn chart_candidates(spec: &ProblemSpec) -> Result<Vec<ChartCandidate>, BoundError> {
    let l = compute_l(spec)?;
    let n_star = compute_n_star(spec, l)?;
    let prices: Vec<i64> = spec.shelves.prefix(l).iter().map(|s| s.price).collect();
    let rank = spec.rank as i128;
    let budget = spec.budget as i128;
    let deepest = prices[l - 1] as i128;

    let mut out = Vec::with_capacity(deepest as usize + 1);
    // shelves with m_s <= j contribute (j - m_s) n*_s = j * stock - weighted
    let mut reached = 0usize;
    let mut stock: i128 = 0;
    let mut weighted: i128 = 0;
    for j in 1..=deepest {
        while reached < l && prices[reached] as i128 <= j {
            stock += n_star[reached] as i128;
            weighted += prices[reached] as i128 * n_star[reached] as i128;
            reached += 1;
        }
        let numer = j * rank + budget + j * stock - weighted;
        let stage = if j <= prices[0] as i128 {
            Stage::Initial
        } else {
            // m_k < j <= m_{k+1}
            let k = prices.iter().take_while(|&&m| (m as i128) < j).count();
            Stage::Shelf(k)
        };
        out.push(ChartCandidate {
            depth: Depth::Blowup(j as u64),
            value: Rational::new(numer, 2 * j),
            stage,
        });
    }
    let total: i128 = n_star.iter().map(|&n| n as i128).sum();
    out.push(ChartCandidate {
        depth: Depth::Terminal,
        value: Rational::new(rank + total, 2),
        stage: Stage::Final,
    });
    Ok(out)
}

/// Minimum candidate and the number of candidates attaining it.
///
/// The count is diagnostic only; the multiplicity of the bound is decided by
/// the exact-spend rule in [`crate::counting::compute_bound`].
pub fn ledger_min(spec: &ProblemSpec) -> Result<(Rational, usize), BoundError> {
    let candidates = chart_candidates(spec)?;
    Ok(minimum_of(&candidates))
}

pub fn minimum_of(candidates: &[ChartCandidate]) -> (Rational, usize) {
    let min = candidates
        .iter()
        .map(|c| &c.value)
        .min()
        .cloned()
        .expect("ledger always holds the terminal candidate");
    let count = candidates.iter().filter(|c| c.value == min).count();
    (min, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(spec: &ProblemSpec) -> Vec<Rational> {
        chart_candidates(spec)
            .unwrap()
            .into_iter()
            .map(|c| c.value)
            .collect()
    }

    #[test]
    fn worked_example_candidates() {
        let spec = ProblemSpec::finite(2, 3, 3, &[(1, 1), (3, 1), (5, 1)]);
        let expected = [
            Rational::new(5, 2),
            Rational::new(8, 4),
            Rational::new(11, 6),
            Rational::new(15, 8),
            Rational::new(19, 10),
            Rational::new(5, 2),
        ];
        assert_eq!(values(&spec), expected);
        let stages: Vec<String> = chart_candidates(&spec)
            .unwrap()
            .iter()
            .map(|c| c.stage.to_string())
            .collect();
        assert_eq!(
            stages,
            ["Step1", "Step3-1", "Step3-1", "Step3-2", "Step3-2", "Step4"]
        );
        assert_eq!(ledger_min(&spec).unwrap(), (Rational::new(11, 6), 1));
    }

    #[test]
    fn boundary_collapses() {
        let spec = ProblemSpec::finite(0, 1, 1, &[(1, 1)]);
        assert_eq!(values(&spec), [Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(ledger_min(&spec).unwrap(), (Rational::new(1, 2), 2));
    }

    #[test]
    fn repeated_minimum_at_exact_spend() {
        let spec = ProblemSpec::finite(0, 2, 2, &[(1, 2), (3, 5)]);
        let (min, count) = ledger_min(&spec).unwrap();
        assert_eq!(min, Rational::from(1));
        assert!(count >= 2);
    }

    #[test]
    fn first_shelf_exhausted() {
        let spec = ProblemSpec::finite(5, 1, 1, &[(2, 1)]);
        assert_eq!(
            values(&spec),
            [Rational::from(3), Rational::new(11, 4), Rational::from(3)]
        );
        assert_eq!(ledger_min(&spec).unwrap().0, Rational::new(11, 4));
    }

    #[test]
    fn six_candidates_for_three_shelves_up_to_five() {
        let spec = ProblemSpec::finite(3, 5, 7, &[(2, 1), (3, 2), (5, 4)]);
        let c = chart_candidates(&spec).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c[5].depth, Depth::Terminal);
    }
}
