//! Independent oracles for the polynomial engine: ring axioms, the product
//! rule, the substitution/evaluation homomorphism law, and the determinant
//! against a plain permutation sum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use parinv_core::poly::{determinant, Monomial, Polynomial, VariableId};
use parinv_core::roots::Root;

fn pool(idx: usize) -> VariableId {
    let cells = [(1, 2), (1, 3), (2, 3), (3, 4)];
    let (i, j) = cells[idx % cells.len()];
    VariableId::Matrix(Root::new(i, j))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly_from_spec(spec: &[(Vec<(usize, u32)>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        spec.iter()
            .map(|(mspec, c)| {
                let mut exps: BTreeMap<VariableId, u32> = BTreeMap::new();
                for &(vi, e) in mspec {
                    *exps.entry(pool(vi)).or_insert(0) += e;
                }
                (Monomial::from_pairs(exps.into_iter().collect()), rat(*c))
            })
            .collect(),
    )
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            prop::collection::vec((0usize..4usize, 1u32..3u32), 0..3),
            -3i64..=3i64,
        ),
        0..4,
    )
    .prop_map(|spec| poly_from_spec(&spec))
}

proptest! {
    #[test]
    fn addition_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn addition_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn multiplication_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn units_and_inverses(a in arb_poly()) {
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
        prop_assert_eq!(&a + &Polynomial::zero(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_rule_holds(a in arb_poly(), b in arb_poly(), vi in 0usize..4) {
        let v = pool(vi);
        let lhs = (&a * &b).differentiate(v);
        let rhs = &(&a.differentiate(v) * &b) + &(&a * &b.differentiate(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_then_evaluate_is_evaluate_composed(
        f in arb_poly(),
        q_spec in prop::collection::vec(
            (prop::collection::vec((1usize..4usize, 1u32..3u32), 0..3), -3i64..=3i64),
            0..4,
        ),
        p1 in -3i64..=3i64,
        p2 in -3i64..=3i64,
        p3 in -3i64..=3i64,
    ) {
        // map sends pool(0) to a polynomial in the other three variables
        let q = poly_from_spec(&q_spec);
        let mut map = BTreeMap::new();
        map.insert(pool(0), q.clone());

        let mut point = BTreeMap::new();
        point.insert(pool(1), rat(p1));
        point.insert(pool(2), rat(p2));
        point.insert(pool(3), rat(p3));

        let lhs = f.substitute(&map).evaluate(&point).unwrap();

        let mut extended = point.clone();
        extended.insert(pool(0), q.evaluate(&point).unwrap());
        let rhs = f.evaluate(&extended).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Plain permutation-sum determinant, counting inversions for the sign.
fn naive_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut acc = Polynomial::zero();
    fn rec(
        m: &[Vec<Polynomial>],
        row: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        acc: &mut Polynomial,
    ) {
        let n = m.len();
        if row == n {
            let mut inversions = 0;
            for a in 0..n {
                for b in (a + 1)..n {
                    if chosen[a] > chosen[b] {
                        inversions += 1;
                    }
                }
            }
            let mut term = Polynomial::one();
            for (r, &c) in chosen.iter().enumerate() {
                term = &term * &m[r][c];
            }
            *acc = if inversions % 2 == 0 {
                &*acc + &term
            } else {
                &*acc - &term
            };
            return;
        }
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                chosen.push(c);
                rec(m, row + 1, used, chosen, acc);
                chosen.pop();
                used[c] = false;
            }
        }
    }
    rec(m, 0, &mut used, &mut chosen, &mut acc);
    acc
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Polynomial>>> {
    prop::collection::vec(prop::collection::vec(arb_poly(), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_matches_permutation_sum_2x2(m in arb_matrix(2)) {
        prop_assert_eq!(determinant(&m), naive_determinant(&m));
    }

    #[test]
    fn determinant_matches_permutation_sum_3x3(m in arb_matrix(3)) {
        prop_assert_eq!(determinant(&m), naive_determinant(&m));
    }

    #[test]
    fn determinant_matches_permutation_sum_4x4(m in arb_matrix(4)) {
        prop_assert_eq!(determinant(&m), naive_determinant(&m));
    }
}

#[test]
fn determinant_of_triangular_matrix_is_diagonal_product() {
    let x = |i, j| Polynomial::var(VariableId::Matrix(Root::new(i, j)));
    let m = vec![
        vec![x(1, 2), x(1, 3), x(1, 4)],
        vec![Polynomial::zero(), x(2, 3), x(2, 4)],
        vec![Polynomial::zero(), Polynomial::zero(), x(3, 4)],
    ];
    let expected = &(&x(1, 2) * &x(2, 3)) * &x(3, 4);
    assert_eq!(determinant(&m), expected);
}
