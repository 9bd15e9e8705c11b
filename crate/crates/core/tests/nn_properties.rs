use lcbound_core::nn::{
    binom, bound_p1, bound_p2, bound_reduced_rank, case_of_reduced_rank, closed_form_p1,
    closed_form_p2, crossover_threshold, exact_determinant, reduced_rank_spec, shelves_p1,
    shelves_p2, vandermonde_witness,
};
use lcbound_core::{
    compute_bound, ActivationSupport, NetworkShape, ProblemSpec, Rational, Shelf, ShelfSequence,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FAMILIES: [ActivationSupport; 3] = [
    ActivationSupport::Exp,
    ActivationSupport::Swish,
    ActivationSupport::Odd,
];

fn shapes(max: u64) -> impl Iterator<Item = NetworkShape> {
    (1..=max).flat_map(move |n| {
        (1..=max).flat_map(move |h| {
            (1..=max)
                .flat_map(move |m| (0..h).map(move |hs| NetworkShape::new(n, h, m, hs).unwrap()))
        })
    })
}

#[test]
fn closed_forms_match_the_counting_rule() {
    for shape in shapes(6) {
        for family in &FAMILIES {
            let pipeline = compute_bound(&shelves_p1(&shape, family).unwrap()).unwrap();
            let closed = closed_form_p1(&shape, family).unwrap();
            assert_eq!(
                closed.lambda, pipeline.lambda_bound,
                "P1 {family:?} {shape:?}"
            );
            assert_eq!(
                (closed.l, closed.k),
                (pipeline.l, pipeline.k),
                "P1 {family:?} {shape:?}"
            );
        }
        if shape.true_hidden > 0 {
            let pipeline = compute_bound(&shelves_p2(&shape).unwrap()).unwrap();
            let closed = closed_form_p2(&shape).unwrap();
            assert_eq!(closed.lambda, pipeline.lambda_bound, "P2 {shape:?}");
            assert_eq!(
                (closed.l, closed.k),
                (pipeline.l, pipeline.k),
                "P2 {shape:?}"
            );
        }
    }
}

#[test]
fn polynomial_closed_form_matches() {
    let supports = [
        vec![1],
        vec![1, 2],
        vec![1, 3],
        vec![2, 3, 7],
        vec![1, 2, 3, 4, 5],
    ];
    for exps in supports {
        let support = ActivationSupport::Polynomial(exps.clone());
        for shape in shapes(5).filter(|s| s.true_hidden == 0) {
            let pipeline = compute_bound(&shelves_p1(&shape, &support).unwrap()).unwrap();
            assert_eq!(
                closed_form_p1(&shape, &support).unwrap().lambda,
                pipeline.lambda_bound,
                "{exps:?} {shape:?}"
            );
        }
    }
}

#[test]
fn families_order_at_p1() {
    for shape in shapes(6) {
        let [exp, swish, odd] = FAMILIES.map(|f| bound_p1(&shape, &f).unwrap().lambda_bound);
        assert!(
            exp >= swish && swish >= odd,
            "{shape:?}: {exp} {swish} {odd}"
        );
    }
}

#[test]
fn exp_prefers_p2() {
    for shape in shapes(6).filter(|s| s.true_hidden > 0) {
        let p1 = bound_p1(&shape, &ActivationSupport::Exp)
            .unwrap()
            .lambda_bound;
        let p2 = bound_p2(&shape).unwrap().lambda_bound;
        assert!(p2 <= p1, "{shape:?}");
    }
}

#[test]
fn single_output_p2_is_a_shifted_tuple() {
    for shape in shapes(6).filter(|s| s.true_hidden > 0 && s.outputs == 1) {
        let n = shape.inputs;
        let (r, alpha, beta) = shape.counting_params();
        let shifted = ShelfSequence::infinite(move |s| {
            let m = s as u64 + 1;
            Shelf::new(m as i64, binom(m + n - 1, m).to_i64().unwrap())
        });
        let expected = compute_bound(&ProblemSpec::new(r, alpha, beta, shifted)).unwrap();
        let got = bound_p2(&shape).unwrap();
        assert_eq!(got.lambda_bound, expected.lambda_bound, "{shape:?}");
        assert_eq!(got.multiplicity, expected.multiplicity, "{shape:?}");
    }
}

#[test]
fn reduced_rank_grid() {
    for m in 1..=8u64 {
        for n in 1..=8u64 {
            for h in 1..=8u64 {
                for r in 0..m.min(n).min(h) {
                    let case = case_of_reduced_rank(m, n, h, r).unwrap();
                    let closed = bound_reduced_rank(m, n, h, r).unwrap();
                    let pipeline = compute_bound(&reduced_rank_spec(m, n, h, r).unwrap()).unwrap();
                    assert_eq!(
                        closed, pipeline.lambda_bound,
                        "{case:?} M={m} N={n} H={h} R={r}"
                    );
                }
            }
        }
    }
    assert_eq!(bound_reduced_rank(2, 2, 2, 1).unwrap(), Rational::from(2));
}

#[test]
fn crossover_does_not_depend_on_true_units() {
    for family in [ActivationSupport::Swish, ActivationSupport::Odd] {
        for m in 1..=10 {
            let base = crossover_threshold(m, &family, 1, 60).unwrap();
            for hs in 2..=3 {
                let other = crossover_threshold(m, &family, hs, 60).unwrap();
                assert_eq!(
                    (other.threshold, other.strict_threshold, other.flips),
                    (base.threshold, base.strict_threshold, base.flips),
                    "{family:?} M={m} H*={hs}"
                );
                for (a, b) in base.rows.iter().zip(&other.rows) {
                    assert_eq!(a.comparison.difference, b.comparison.difference);
                }
            }
        }
    }
}

/// Determinant straight from the permutation expansion.
fn leibniz(matrix: &[Vec<Rational>]) -> Rational {
    fn go(matrix: &[Vec<Rational>], row: usize, used: &mut Vec<bool>, sign: i64) -> Rational {
        let n = matrix.len();
        if row == n {
            return Rational::from(sign);
        }
        let mut acc = Rational::zero();
        for col in 0..n {
            if used[col] {
                continue;
            }
            // sign flips once per unused column to the left of `col`
            let inversions = used[..col].iter().filter(|u| !**u).count() as i64;
            used[col] = true;
            let rest = go(
                matrix,
                row + 1,
                used,
                if inversions % 2 == 0 { sign } else { -sign },
            );
            used[col] = false;
            acc = acc + &matrix[row][col] * &rest;
        }
        acc
    }
    go(matrix, 0, &mut vec![false; matrix.len()], 1)
}

fn to_rational(matrix: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<Rational>> {
    matrix
        .iter()
        .map(|row| row.iter().map(|x| Rational::from(x.clone())).collect())
        .collect()
}

/// `h` distinct exponent tuples in `n` variables of total degree at most `max_degree`.
fn random_monomials<R: Rng>(rng: &mut R, n: usize, h: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        all = all
            .into_iter()
            .flat_map(|p| {
                (0..=max_degree).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .filter(|q| q.iter().sum::<u32>() <= max_degree)
            .collect();
    }
    sample(rng, all.len(), h.min(all.len()))
        .into_iter()
        .map(|i| all[i].clone())
        .collect()
}

#[test]
fn vandermonde_witnesses_are_nonsingular() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.random_range(1..=3);
        let h = rng.random_range(1..=5);
        let exps = random_monomials(&mut rng, n, h, 6);
        let w = vandermonde_witness(&exps).unwrap();
        assert!(!w.determinant.is_zero(), "{exps:?}");
        assert_eq!(w.determinant, leibniz(&to_rational(&w.matrix)), "{exps:?}");
    }
}

proptest! {
    #[test]
    fn elimination_matches_leibniz(entries in proptest::collection::vec(-6i64..=6, 16), size in 1usize..=4) {
        let matrix: Vec<Vec<Rational>> = (0..size)
            .map(|i| (0..size).map(|j| Rational::from(entries[i * 4 + j])).collect())
            .collect();
        prop_assert_eq!(exact_determinant(&matrix), leibniz(&matrix));
    }
}
