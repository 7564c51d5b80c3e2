use super::*;
use crate::ring::{int_prime, parse_elem, AlgPrime, BaseRing, CoreRing, Elem, FieldSpec};

fn zz() -> BaseRing {
    BaseRing::Integers
}

fn qxy_ring() -> BaseRing {
    BaseRing::BivariatePoly {
        coeff: FieldSpec::Rationals,
    }
}

fn bi(s: &str) -> Elem {
    parse_elem(
        s,
        &CoreRing::BiPoly {
            coeff: FieldSpec::Rationals,
        },
    )
    .unwrap()
}

fn maximal_xy() -> AlgPrime {
    AlgPrime::new(qxy_ring(), vec![bi("x"), bi("y")], 2).unwrap()
}

#[test]
fn three_is_a_unit_in_z_localized_at_two() {
    let e = RingExpr::base(zz()).localize(int_prime(2));
    let cert = is_unit(&Elem::Int(3.into()), &e).unwrap();
    assert_eq!(cert.verdict, UnitVerdict::Unit);
    assert!(cert.witness.contains("not contained in localizing prime"));
}

#[test]
fn two_is_not_a_unit_in_the_completed_local_ring() {
    let p = int_prime(2);
    let e = RingExpr::base(zz()).localize(p.clone()).complete(p);
    let cert = is_unit(&Elem::Int(2.into()), &e).unwrap();
    assert_eq!(cert.verdict, UnitVerdict::NonUnit);
}

#[test]
fn constant_term_makes_a_unit_at_the_origin() {
    let e = RingExpr::base(qxy_ring()).localize(maximal_xy());
    let cert = is_unit(&bi("x + 1"), &e).unwrap();
    assert_eq!(cert.verdict, UnitVerdict::Unit);
    // oracle: normal form of x+1 against a Groebner basis of (x, y) is 1
    let gb = crate::groebner::buchberger(
        &[
            match bi("x") {
                Elem::Bi(p) => p,
                _ => unreachable!(),
            },
            match bi("y") {
                Elem::Bi(p) => p,
                _ => unreachable!(),
            },
        ],
        crate::groebner::DEFAULT_DEGREE_CAP,
    )
    .unwrap();
    let nf = crate::groebner::normal_form(
        &match bi("x + 1") {
            Elem::Bi(p) => p,
            _ => unreachable!(),
        },
        &gb,
    );
    assert!(!nf.is_zero());
}

#[test]
fn family_product_unit_test_is_unsupported() {
    let fam = PrimeFamily {
        base: zz(),
        dim: 0,
        constraint: FamilyConstraint::None,
    };
    let e = RingExpr::FamilyProduct {
        family: fam,
        template: Box::new(RingExpr::Complete(
            Box::new(RingExpr::Localize(
                Box::new(RingExpr::base(zz())),
                PrimeSlot::Var,
            )),
            PrimeSlot::Var,
        )),
    };
    assert_eq!(
        is_unit(&Elem::Int(2.into()), &e),
        Err(ExprError::UnsupportedExpression)
    );
}

fn all_maximal_family_product() -> RingExpr {
    RingExpr::FamilyProduct {
        family: PrimeFamily {
            base: zz(),
            dim: 0,
            constraint: FamilyConstraint::None,
        },
        template: Box::new(RingExpr::Complete(
            Box::new(RingExpr::Localize(
                Box::new(RingExpr::base(zz())),
                PrimeSlot::Var,
            )),
            PrimeSlot::Var,
        )),
    }
}

#[test]
fn family_over_all_maximal_primes_survives_only_the_test_prime() {
    let report = relevant_primes(&all_maximal_family_product(), &[int_prime(2)]);
    assert_eq!(report.primes, vec![int_prime(2)]);
    assert!(report.omitted.is_empty());
    // spot-check the kill of a neighboring factor: the Koszul complex on 2
    // over ZZ_(3) is acyclic
    let core = CoreRing::IntegersLocalized {
        primes: vec![3.into()],
    };
    let d_in = crate::linalg::Mat::from_rows(&core, vec![vec![core.from_i64(2)]]);
    let d_out = crate::linalg::Mat::zero(&core, 0, 1);
    let h = crate::linalg::homology_invariants(&d_in, &d_out).unwrap();
    assert!(h.is_zero(), "2 inverts in ZZ_(3): {h}");
}

#[test]
fn rationals_survive_nothing() {
    let e = RingExpr::base(BaseRing::Rationals);
    let report = relevant_primes(&e, &[int_prime(2)]);
    assert!(report.primes.is_empty());
}

#[test]
fn finite_product_keeps_both_matching_factors() {
    let f2 = RingExpr::base(zz())
        .localize(int_prime(2))
        .complete(int_prime(2));
    let f3 = RingExpr::base(zz())
        .localize(int_prime(3))
        .complete(int_prime(3));
    let e = RingExpr::FiniteProduct(vec![f2, f3]);
    let report = relevant_primes(&e, &[int_prime(2), int_prime(3)]);
    assert_eq!(report.primes, vec![int_prime(2), int_prime(3)]);
}

#[test]
fn closed_fiber_over_height_one_prime_is_not_finitizable() {
    let x_prime = AlgPrime::new(qxy_ring(), vec![bi("x")], 1).unwrap();
    let fam = PrimeFamily {
        base: qxy_ring(),
        dim: 0,
        constraint: FamilyConstraint::None,
    };
    match ambient_survivors(&fam, &x_prime) {
        AmbientSurvivors::Infinite(desc) => {
            assert!(desc.contains("closed points containing (x)"));
        }
        other => panic!("expected infinite survivors, got {other:?}"),
    }
}

#[test]
fn closed_test_prime_over_bivariate_base_is_exact() {
    let m = maximal_xy();
    let fam = PrimeFamily {
        base: qxy_ring(),
        dim: 0,
        constraint: FamilyConstraint::None,
    };
    assert_eq!(
        ambient_survivors(&fam, &m),
        AmbientSurvivors::Finite(vec![m.clone()])
    );
    // no height-one prime contains a maximal ideal
    let fam1 = PrimeFamily {
        base: qxy_ring(),
        dim: 1,
        constraint: FamilyConstraint::None,
    };
    assert_eq!(ambient_survivors(&fam1, &m), AmbientSurvivors::Finite(vec![]));
}

#[test]
fn rewriting_preserves_homology_on_pid_instances() {
    // the same presentation read over a carrier and its normal form has
    // identical homology invariants
    let core = CoreRing::IntegersLocalized { primes: vec![2.into()] };
    let p = int_prime(2);
    let raw = RingExpr::base(zz())
        .localize(p.clone())
        .complete(p.clone())
        .localize(p.clone());
    let nf = normalize(&raw);
    assert_ne!(raw, nf);
    for n in [2i64, 4, 12] {
        let m_raw = crate::complex::BoundedComplex::cyclic(raw.clone(), core.clone(), &core.from_i64(n));
        let m_nf = m_raw.with_carrier(nf.clone());
        let t1 = crate::complex::homology_table(&m_raw).unwrap();
        let t2 = crate::complex::homology_table(&m_nf).unwrap();
        assert_eq!(t1.entries, t2.entries);
    }
}

#[test]
fn certified_units_make_two_term_complexes_acyclic() {
    // whenever a unit is certified, the two-term complex on it over the
    // reduced local core has zero homology
    let cases: Vec<(Elem, RingExpr)> = vec![
        (Elem::Int(3.into()), RingExpr::base(zz()).localize(int_prime(2))),
        (Elem::Int(7.into()), RingExpr::base(zz()).localize(int_prime(2)).complete(int_prime(2))),
        (Elem::Int(5.into()), RingExpr::base(zz()).localize(AlgPrime::zero_ideal(zz()))),
        (Elem::Int((-9).into()), RingExpr::base(zz()).localize(int_prime(2))),
    ];
    for (e, expr) in cases {
        let cert = is_unit(&e, &expr).unwrap();
        assert_eq!(cert.verdict, UnitVerdict::Unit, "{e} over {expr}");
        let lc = expr.local_core().unwrap();
        let coerced = crate::functors::coerce_to_core(&e, &lc.core);
        let k = crate::complex::koszul_with_carrier(expr.clone(), &lc.core, &[coerced]).unwrap();
        assert!(crate::complex::is_acyclic(&k).unwrap(), "{e} over {expr}");
    }
}

#[test]
fn unit_certificates_over_finite_products() {
    let f2 = RingExpr::base(zz())
        .localize(int_prime(2))
        .complete(int_prime(2));
    let f3 = RingExpr::base(zz())
        .localize(int_prime(3))
        .complete(int_prime(3));
    let e = RingExpr::FiniteProduct(vec![f2, f3]);
    let seven = is_unit(&Elem::Int(7.into()), &e).unwrap();
    assert_eq!(seven.verdict, UnitVerdict::Unit);
    assert!(seven.witness.contains("every factor"));
    let two = is_unit(&Elem::Int(2.into()), &e).unwrap();
    assert_eq!(two.verdict, UnitVerdict::NonUnit);
    let zero = is_unit(&Elem::Int(0.into()), &e).unwrap();
    assert_eq!(zero.verdict, UnitVerdict::Zero);
}
