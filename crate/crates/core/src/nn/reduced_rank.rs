//! Linear activation: `Y = A B X + noise` with `rank(A* B*) = R`.

use std::fmt;

use super::NnError;
use crate::counting::{compute_bound, ProblemSpec};
use crate::rational::Rational;

/// Which regime of the reduced-rank bound applies. The names follow the
/// established four-way classification of this model; its first regime is
/// never produced by the counting rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReducedRankCase {
    /// `N < H < M` or `H <= N < M`: `(HN - HR + MR) / 2`.
    Case2,
    /// `N >= M` and `N >= H`: `(HM - HR + NR) / 2`.
    Case3,
    /// `H >= M` and `N < H`: `MN / 2`.
    Case4,
}

impl fmt::Display for ReducedRankCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn check_rank(outputs: u64, inputs: u64, hidden: u64, rank: u64) -> Result<(), NnError> {
    let limit = outputs.min(inputs).min(hidden);
    if rank >= limit {
        return Err(NnError::RankTooLarge { rank, limit });
    }
    Ok(())
}

pub fn case_of_reduced_rank(
    outputs: u64,
    inputs: u64,
    hidden: u64,
    rank: u64,
) -> Result<ReducedRankCase, NnError> {
    check_rank(outputs, inputs, hidden, rank)?;
    let (m, n, h) = (outputs, inputs, hidden);
    let case2 = (n < h && h < m) || (h <= n && n < m);
    let case3 = n >= m && n >= h;
    let case4 = h >= m && n < h;
    Ok(match (case2, case3, case4) {
        (true, false, false) => ReducedRankCase::Case2,
        (false, true, false) => ReducedRankCase::Case3,
        (false, false, true) => ReducedRankCase::Case4,
        _ => unreachable!("reduced-rank regimes partition the shapes (M={m}, N={n}, H={h})"),
    })
}

/// `(r, alpha, beta, gamma, m_1, n_1) =
/// (R(M+N-R), (M-R)(H-R), (N-R)(H-R), 1, 1, (M-R)(N-R))`.
pub fn reduced_rank_spec(
    outputs: u64,
    inputs: u64,
    hidden: u64,
    rank: u64,
) -> Result<ProblemSpec, NnError> {
    check_rank(outputs, inputs, hidden, rank)?;
    let (m, n, h, r) = (outputs as i64, inputs as i64, hidden as i64, rank as i64);
    Ok(ProblemSpec::finite(
        r * (m + n - r),
        (m - r) * (h - r),
        (n - r) * (h - r),
        &[(1, (m - r) * (n - r))],
    ))
}

/// Reduced-rank bound; the regime formula must match the counting rule.
pub fn bound_reduced_rank(
    outputs: u64,
    inputs: u64,
    hidden: u64,
    rank: u64,
) -> Result<Rational, NnError> {
    let case = case_of_reduced_rank(outputs, inputs, hidden, rank)?;
    let (m, n, h, r) = (outputs as i64, inputs as i64, hidden as i64, rank as i64);
    let closed = match case {
        ReducedRankCase::Case2 => Rational::new(h * n - h * r + m * r, 2),
        ReducedRankCase::Case3 => Rational::new(h * m - h * r + n * r, 2),
        ReducedRankCase::Case4 => Rational::new(m * n, 2),
    };
    let pipeline = compute_bound(&reduced_rank_spec(outputs, inputs, hidden, rank)?)?.lambda_bound;
    if closed != pipeline {
        return Err(NnError::InternalInconsistency {
            closed_form: closed,
            pipeline,
        });
    }
    Ok(closed)
}
