//! Three-layer networks `Y = A sigma(B X) + noise`.
//!
//! Builds counting-rule inputs for the two singular points studied here:
//! P1 (redundant units with zero input weights) and P2 (redundant units
//! duplicating the input weights of a true unit), evaluates the specialized
//! closed forms, and cross-checks them against the generic rule.

mod compare;
mod points;
mod reduced_rank;
mod weights;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::error::BoundError;
use crate::rational::Rational;

pub use compare::{
    compare_p1_p2, crossover_threshold, crossover_threshold_with_inputs, scan_comparison,
    Comparison, ComparisonRow, CrossoverScan, Winner,
};
pub use points::{
    bound_p1, bound_p2, bound_point, closed_form_p1, closed_form_p2, p2_simplified_k,
    p2_simplified_l, shelves_p1, shelves_p2, ClosedForm, Point, INDEPENDENCE_NOTE,
};
pub use reduced_rank::{
    bound_reduced_rank, case_of_reduced_rank, reduced_rank_spec, ReducedRankCase,
};
pub use weights::{
    check_weight_admissibility, exact_determinant, vandermonde_witness, AdmissibilityReport,
    VandermondeWitness, WeightMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NnError {
    #[error("network shape needs N, H, M >= 1 and 0 <= H* < H (got N={inputs}, H={hidden}, M={outputs}, H*={true_hidden})")]
    InvalidShape {
        inputs: u64,
        hidden: u64,
        outputs: u64,
        true_hidden: u64,
    },
    #[error("polynomial activations are only handled when the true network has no hidden units (H* = {0})")]
    PolynomialWithHiddenUnits(u64),
    #[error("the duplicated-weight point P2 needs at least one true hidden unit")]
    P2RequiresTrueUnits,
    #[error("operation needs a non-polynomial activation")]
    PolynomialActivation,
    #[error("activation exponents must be non-empty, positive and strictly increasing")]
    InvalidExponents,
    #[error("rank R = {rank} must be below min(M, N, H) = {limit}")]
    RankTooLarge { rank: u64, limit: u64 },
    #[error("closed form {closed_form} disagrees with the counting rule {pipeline}")]
    InternalInconsistency {
        closed_form: Rational,
        pipeline: Rational,
    },
    #[error("no P2-to-P1 crossover within H - H* <= {0}")]
    NotFoundWithin(u64),
    #[error("monomial exponent tuples must be distinct (rows {0} and {1} coincide)")]
    DuplicateMonomials(usize, usize),
    #[error("monomial exponent tuples must be non-empty and share one length")]
    RaggedMonomials,
    #[error("weight matrix rows differ in length")]
    RaggedWeights,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

impl NnError {
    pub fn code(&self) -> &'static str {
        match self {
            NnError::InvalidShape { .. } => "InvalidShape",
            NnError::PolynomialWithHiddenUnits(_) => "PolynomialWithHiddenUnits",
            NnError::P2RequiresTrueUnits => "P2RequiresTrueUnits",
            NnError::PolynomialActivation => "PolynomialActivation",
            NnError::InvalidExponents => "InvalidExponents",
            NnError::RankTooLarge { .. } => "RankTooLarge",
            NnError::InternalInconsistency { .. } => "InternalInconsistency",
            NnError::NotFoundWithin(_) => "NotFoundWithin",
            NnError::DuplicateMonomials(..) => "DuplicateMonomials",
            NnError::RaggedMonomials => "RaggedMonomials",
            NnError::RaggedWeights => "RaggedWeights",
            NnError::Bound(e) => e.code(),
        }
    }
}

/// `(N, H, M, H*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NetworkShape {
    pub inputs: u64,
    pub hidden: u64,
    pub outputs: u64,
    pub true_hidden: u64,
}

impl NetworkShape {
    pub fn new(inputs: u64, hidden: u64, outputs: u64, true_hidden: u64) -> Result<Self, NnError> {
        if inputs == 0 || hidden == 0 || outputs == 0 || true_hidden >= hidden {
            return Err(NnError::InvalidShape {
                inputs,
                hidden,
                outputs,
                true_hidden,
            });
        }
        Ok(NetworkShape {
            inputs,
            hidden,
            outputs,
            true_hidden,
        })
    }

    /// `H - H*`.
    pub fn redundant(&self) -> u64 {
        self.hidden - self.true_hidden
    }

    /// `(r, alpha, beta) = ((M+N) H*, M (H-H*), N (H-H*))`, shared by P1 and P2.
    pub fn counting_params(&self) -> (i64, i64, i64) {
        let d = self.redundant() as i64;
        (
            ((self.outputs + self.inputs) * self.true_hidden) as i64,
            self.outputs as i64 * d,
            self.inputs as i64 * d,
        )
    }
}

/// Orders `s` with `sigma^(s)(0) != 0`, listed increasingly.
#[derive(Clone)]
pub enum ActivationSupport {
    /// `e^x - 1`, `x e^x`, mish: `1, 2, 3, 4, ...`
    Exp,
    /// swish, GELU: `1, 2, 4, 6, 8, ...`
    Swish,
    /// `tanh`, `sin`, `arctan`: `1, 3, 5, 7, ...`
    Odd,
    /// `sum_s c_s x^{m_s}` with the listed exponents.
    Polynomial(Vec<u64>),
    /// Any other non-polynomial activation; maps a 1-based index to `m_s`.
    Custom(Arc<dyn Fn(usize) -> u64 + Send + Sync>),
}

impl ActivationSupport {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(usize) -> u64 + Send + Sync + 'static,
    {
        ActivationSupport::Custom(Arc::new(f))
    }

    /// `m_s` for 1-based `s`; `None` past the last polynomial exponent.
    pub fn exponent(&self, s: usize) -> Option<u64> {
        if s == 0 {
            return None;
        }
        let s64 = s as u64;
        match self {
            ActivationSupport::Exp => Some(s64),
            ActivationSupport::Swish => Some(if s == 1 { 1 } else { 2 * (s64 - 1) }),
            ActivationSupport::Odd => Some(2 * s64 - 1),
            ActivationSupport::Polynomial(list) => list.get(s - 1).copied(),
            ActivationSupport::Custom(f) => Some(f(s)),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, ActivationSupport::Polynomial(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ActivationSupport::Exp => "exp",
            ActivationSupport::Swish => "swish",
            ActivationSupport::Odd => "tanh",
            ActivationSupport::Polynomial(_) => "poly",
            ActivationSupport::Custom(_) => "custom",
        }
    }

    pub(crate) fn check_polynomial(&self) -> Result<(), NnError> {
        if let ActivationSupport::Polynomial(list) = self {
            let increasing = list.windows(2).all(|w| w[0] < w[1]);
            if list.is_empty() || list[0] == 0 || !increasing {
                return Err(NnError::InvalidExponents);
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ActivationSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActivationSupport::Polynomial(list) => f.debug_tuple("Polynomial").field(list).finish(),
            ActivationSupport::Custom(_) => {
                let head: Vec<u64> = (1..=4).filter_map(|s| self.exponent(s)).collect();
                f.debug_tuple("Custom").field(&head).finish()
            }
            other => f.write_str(match other {
                ActivationSupport::Exp => "Exp",
                ActivationSupport::Swish => "Swish",
                _ => "Odd",
            }),
        }
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i+1) = C(n, i) (n - i) / (i + 1) exactly
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
