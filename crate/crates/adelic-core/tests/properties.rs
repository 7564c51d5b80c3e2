//! Property tests for the algebraic invariants the engine relies on.

use adelic_core::complex::{homology_table, tensor, BoundedComplex};
use adelic_core::expr::{normalize, RingExpr};
use adelic_core::linalg::smith_normal_form;
use adelic_core::ring::{int_prime, parse_elem, AlgPrime, BaseRing, CoreRing, Elem};
use adelic_core::Mat;
use proptest::prelude::*;

fn int_matrix() -> impl Strategy<Value = Mat> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..10, r * c).prop_map(move |v| {
                let core = CoreRing::Integers;
                let rows: Vec<Vec<Elem>> = v
                    .chunks(c)
                    .map(|row| row.iter().map(|n| core.from_i64(*n)).collect())
                    .collect();
                Mat::from_rows(&core, rows)
            })
        })
}

proptest! {
    #[test]
    fn snf_transforms_are_exact(m in int_matrix()) {
        let core = CoreRing::Integers;
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diag.clone());
        // divisibility chain with no unit gaps after the first
        let diag = snf.diagonal_entries();
        for w in diag.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            prop_assert!(core.divides(&w[0], &w[1]));
        }
    }

    #[test]
    fn snf_is_idempotent_on_diagonals(m in int_matrix()) {
        let d1 = smith_normal_form(&m).unwrap().diag;
        let d2 = smith_normal_form(&d1).unwrap().diag;
        prop_assert_eq!(d1, d2);
    }
}

fn ring_expr() -> impl Strategy<Value = RingExpr> {
    let base = Just(RingExpr::base(BaseRing::Integers));
    base.prop_recursive(4, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| {
                e.localize(int_prime(2))
            }),
            inner.clone().prop_map(|e| {
                e.localize(AlgPrime::zero_ideal(BaseRing::Integers))
            }),
            inner.clone().prop_map(|e| {
                e.complete(int_prime(3))
            }),
            inner.clone().prop_map(|e| {
                e.complete(AlgPrime::zero_ideal(BaseRing::Integers))
            }),
            (inner.clone(), inner).prop_map(|(a, b)| RingExpr::FiniteProduct(vec![a, b])),
        ]
    })
}

proptest! {
    #[test]
    fn normalization_is_idempotent(e in ring_expr()) {
        let n1 = normalize(&e);
        let n2 = normalize(&n1);
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn rewrite_terminates_within_its_measure(e in ring_expr()) {
        let bound = e.size() + e.family_product_count();
        let (_, steps) = adelic_core::expr::rewrite_steps(&e);
        prop_assert!(steps <= bound);
    }
}

fn element_string() -> impl Strategy<Value = String> {
    prop_oneof![
        (-999i64..1000).prop_map(|n| n.to_string()),
        (-99i64..100, 1i64..60).prop_map(|(a, b)| format!("{a}/{b}")),
    ]
}

proptest! {
    #[test]
    fn rational_parse_display_roundtrip(s in element_string()) {
        let core = CoreRing::Rationals;
        let e = parse_elem(&s, &core).unwrap();
        let t = e.to_string();
        let e2 = parse_elem(&t, &core).unwrap();
        prop_assert_eq!(e, e2);
    }

    #[test]
    fn tensor_with_the_unit_preserves_homology(n in 1i64..60) {
        let core = CoreRing::Integers;
        let carrier = RingExpr::base(BaseRing::Integers);
        let m = BoundedComplex::cyclic(carrier.clone(), core.clone(), &core.from_i64(n));
        let unit = BoundedComplex::unit(carrier, core);
        let t = tensor(&m, &unit).unwrap();
        prop_assert_eq!(
            homology_table(&t).unwrap().entries,
            homology_table(&m).unwrap().entries
        );
    }
}
