//! Checks on true input weights `b_i*`, and a nonsingular witness for the
//! monomial evaluation matrix.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::NnError;
use crate::rational::Rational;

/// Rows are the input-weight vectors `b_i* in Q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<Rational>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, NnError> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(NnError::RaggedWeights);
            }
        }
        Ok(WeightMatrix { rows })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self, NnError> {
        WeightMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

/// Violations of "`b_i* != 0` and `b_i* != +-b_j*` for `i != j`".
/// All indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub zero_rows: Vec<usize>,
    pub equal_pairs: Vec<(usize, usize)>,
    pub opposite_pairs: Vec<(usize, usize)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.zero_rows.is_empty() && self.equal_pairs.is_empty() && self.opposite_pairs.is_empty()
    }

    /// Equal and opposite pairs together, sorted.
    pub fn violating_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self
            .equal_pairs
            .iter()
            .chain(&self.opposite_pairs)
            .copied()
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

pub fn check_weight_admissibility(weights: &WeightMatrix) -> AdmissibilityReport {
    let rows = weights.rows();
    let mut report = AdmissibilityReport::default();
    for (i, row) in rows.iter().enumerate() {
        if row.iter().all(Rational::is_zero) {
            report.zero_rows.push(i + 1);
        }
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i] == rows[j] {
                report.equal_pairs.push((i + 1, j + 1));
            } else if rows[i].iter().zip(&rows[j]).all(|(a, b)| *a == -b.clone()) {
                report.opposite_pairs.push((i + 1, j + 1));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeWitness {
    /// `b_i = (t_i, t_i^L, ..., t_i^{L^{N-1}})` with `t_i = i`.
    pub weights: Vec<Vec<BigInt>>,
    /// Base `L = D + 1`, `D` the largest total degree.
    pub base: u64,
    /// Entry `(i, k)` is the `k`-th monomial evaluated at `b_i`.
    pub matrix: Vec<Vec<BigInt>>,
    pub determinant: Rational,
}

/// Input weights at which the given `H` distinct monomials in `N` variables
/// evaluate to a nonsingular `H x H` matrix.
pub fn vandermonde_witness(exponents: &[Vec<u32>]) -> Result<VandermondeWitness, NnError> {
    let Some(first) = exponents.first() else {
        return Err(NnError::RaggedMonomials);
    };
    let vars = first.len();
    if vars == 0 || exponents.iter().any(|e| e.len() != vars) {
        return Err(NnError::RaggedMonomials);
    }
    for i in 0..exponents.len() {
        for j in i + 1..exponents.len() {
            if exponents[i] == exponents[j] {
                return Err(NnError::DuplicateMonomials(i + 1, j + 1));
            }
        }
    }
    let max_degree = exponents
        .iter()
        .map(|e| e.iter().map(|&h| h as u64).sum::<u64>())
        .max()
        .unwrap_or(0);
    let base = max_degree + 1;

    let weights: Vec<Vec<BigInt>> = (1..=exponents.len() as u64)
        .map(|t| {
            (0..vars as u32)
                .map(|j| BigInt::from(t).pow(base.pow(j)))
                .collect()
        })
        .collect();
    let matrix: Vec<Vec<BigInt>> = weights
        .iter()
        .map(|b| {
            exponents
                .iter()
                .map(|h| {
                    b.iter()
                        .zip(h)
                        .fold(BigInt::one(), |acc, (x, &p)| acc * x.pow(p))
                })
                .collect()
        })
        .collect();
    let rational: Vec<Vec<Rational>> = matrix
        .iter()
        .map(|row| row.iter().map(|x| Rational::from(x.clone())).collect())
        .collect();
    let determinant = exact_determinant(&rational);
    Ok(VandermondeWitness {
        weights,
        base,
        matrix,
        determinant,
    })
}

/// Determinant by Gaussian elimination over the rationals.
pub fn exact_determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    let mut a = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &delta;
            }
        }
    }
    det
}
