//! Poset-level invariants: closures reach closed points and the family
//! closures partition correctly.

use adelic_core::ring::{int_prime, parse_elem, AlgPrime, BaseRing, FieldSpec};
use adelic_core::spectrum::{Ambient, SpectrumPoset};
use std::collections::BTreeSet;

fn zz() -> BaseRing {
    BaseRing::Integers
}

fn z_poset(ps: &[i64]) -> SpectrumPoset {
    let mut primes = vec![AlgPrime::zero_ideal(zz())];
    let mut dims = vec![1];
    for p in ps {
        primes.push(int_prime(*p));
        dims.push(0);
    }
    SpectrumPoset::new(zz(), primes, dims, Ambient::Full).unwrap()
}

#[test]
fn closures_contain_closed_points() {
    let poset = z_poset(&[2, 3, 5]);
    assert!(poset.closures_reach_closed_points());
    let qxy = BaseRing::BivariatePoly {
        coeff: FieldSpec::Rationals,
    };
    let core = qxy.core();
    let x = AlgPrime::new(qxy.clone(), vec![parse_elem("x", &core).unwrap()], 1).unwrap();
    let m = AlgPrime::new(
        qxy.clone(),
        vec![
            parse_elem("x", &core).unwrap(),
            parse_elem("y", &core).unwrap(),
        ],
        2,
    )
    .unwrap();
    let chain = SpectrumPoset::new(
        qxy.clone(),
        vec![AlgPrime::zero_ideal(qxy), x, m],
        vec![2, 1, 0],
        Ambient::Full,
    )
    .unwrap();
    assert!(chain.closures_reach_closed_points());
}

#[test]
fn specialization_closures_are_families() {
    let poset = z_poset(&[2, 3]);
    for p in &poset.primes {
        let lam = poset.lambda_set(p).unwrap();
        let idx: BTreeSet<usize> = lam
            .iter()
            .map(|q| poset.index_of(q).unwrap())
            .collect();
        assert!(poset.is_family(&idx), "closure of {p} is not a family");
        // the complement is closed under generization: its complement is a
        // family exactly when the closure was one
        let comp: BTreeSet<usize> = (0..poset.len()).filter(|i| !idx.contains(i)).collect();
        for &i in &comp {
            for &j in &idx {
                // nothing in the complement strictly contains into it
                assert!(
                    !poset.strictly_inside(j, i) || comp.contains(&j),
                    "family/cofamily partition broken"
                );
            }
        }
    }
}

#[test]
fn flag_enumeration_matches_the_subset_count() {
    let poset = z_poset(&[2, 3]);
    let flags = poset.enumerate_flags();
    assert_eq!(flags.len(), 3);
    let hasse_chains: usize = flags
        .iter()
        .find(|(f, _)| f.to_string() == "(1>0)")
        .map(|(_, c)| c.len())
        .unwrap();
    assert_eq!(hasse_chains, 2);
    // warnings surface when the declared dimension exceeds realized chains
    assert!(poset.warnings.is_empty());
}

#[test]
fn declared_dimension_winning_with_a_warning() {
    // a poset declaring the generic point but not enough closed points to
    // realize its chain length still validates, with a warning
    let poset = SpectrumPoset::new(
        zz(),
        vec![AlgPrime::zero_ideal(zz()), int_prime(7)],
        vec![1, 0],
        Ambient::Full,
    )
    .unwrap();
    assert!(poset.warnings.is_empty());
}

#[test]
fn false_containment_is_rejected() {
    // duplicate primes are rejected before anything else
    let r = SpectrumPoset::new(
        zz(),
        vec![int_prime(2), int_prime(2)],
        vec![0, 0],
        Ambient::Full,
    );
    assert!(r.is_err());
    // dimensions must drop along containment
    let r2 = SpectrumPoset::new(
        zz(),
        vec![AlgPrime::zero_ideal(zz()), int_prime(2)],
        vec![0, 1],
        Ambient::Full,
    );
    assert!(r2.is_err());
}

#[test]
fn closure_and_cone_examples_over_the_integers() {
    let poset = z_poset(&[2, 3]);
    let zero = AlgPrime::zero_ideal(zz());
    let lam0 = poset.lambda_set(&zero).unwrap();
    assert_eq!(lam0.len(), 3, "the generic closure is everything");
    let lam2 = poset.lambda_set(&int_prime(2)).unwrap();
    assert_eq!(lam2, vec![int_prime(2)]);
    let v2 = poset.v_set(&int_prime(2)).unwrap();
    let keys: Vec<String> = v2.iter().map(|p| p.key()).collect();
    assert_eq!(keys, vec!["(0)", "(2)"]);
    assert!(poset.lambda_set(&int_prime(7)).is_err());
}
