use super::*;
use crate::complex::BoundedComplex;
use crate::expr::{normalize, RingExpr};
use crate::ring::{int_prime, parse_elem, AlgPrime, BaseRing, CoreRing, FieldSpec};
use crate::spectrum::{Ambient, Flag, SpectrumPoset};

fn zz() -> BaseRing {
    BaseRing::Integers
}

fn hasse_poset(ps: &[i64], ambient: Ambient) -> SpectrumPoset {
    let mut primes = vec![AlgPrime::zero_ideal(zz())];
    let mut dims = vec![1];
    for p in ps {
        primes.push(int_prime(*p));
        dims.push(0);
    }
    SpectrumPoset::new(zz(), primes, dims, ambient).unwrap()
}

fn unit_z() -> BoundedComplex {
    BoundedComplex::unit(RingExpr::base(zz()), CoreRing::Integers)
}

fn qxy() -> BaseRing {
    BaseRing::BivariatePoly {
        coeff: FieldSpec::Rationals,
    }
}

fn kxy_chain_poset() -> SpectrumPoset {
    let core = qxy().core();
    let x = AlgPrime::new(qxy(), vec![parse_elem("x", &core).unwrap()], 1).unwrap();
    let m = AlgPrime::new(
        qxy(),
        vec![
            parse_elem("x", &core).unwrap(),
            parse_elem("y", &core).unwrap(),
        ],
        2,
    )
    .unwrap();
    SpectrumPoset::new(
        qxy(),
        vec![AlgPrime::zero_ideal(qxy()), x, m],
        vec![2, 1, 0],
        Ambient::Full,
    )
    .unwrap()
}

#[test]
fn hasse_square_corners() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    assert_eq!(cube.r, 1);
    assert_eq!(cube.entries.len(), 3);
    // flag (1): the rationals
    let top = cube.entry(&Flag::new(vec![1]).unwrap()).unwrap();
    assert_eq!(
        top.carrier,
        RingExpr::base(zz()).localize(AlgPrime::zero_ideal(zz()))
    );
    // flag (0): a family product over all closed points
    let bottom = cube.entry(&Flag::new(vec![0]).unwrap()).unwrap();
    assert!(bottom.carrier.contains_family_product());
    // flag (1>0): the family product localized at the generic point
    let corner = cube.entry(&Flag::new(vec![1, 0]).unwrap()).unwrap();
    match &corner.carrier {
        RingExpr::Localize(inner, _) => assert!(inner.contains_family_product()),
        other => panic!("unexpected corner carrier {other}"),
    }
}

#[test]
fn semilocal_square_has_finite_products() {
    let poset = hasse_poset(&[2, 3], Ambient::Semilocal);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let bottom = cube.entry(&Flag::new(vec![0]).unwrap()).unwrap();
    assert!(!bottom.carrier.contains_family_product());
    let chains = instantiate_chains(&bottom.carrier, &poset);
    assert_eq!(chains.len(), 2);
    // each factor is the completed local ring at its closed point
    for (_chain, expr) in &chains {
        match expr {
            RingExpr::Complete(inner, _) => match inner.as_ref() {
                RingExpr::Localize(b, _) => assert_eq!(**b, RingExpr::base(zz())),
                other => panic!("unexpected {other}"),
            },
            other => panic!("unexpected factor {other}"),
        }
    }
}

#[test]
fn zero_dimensional_poset_gives_single_completed_entry() {
    let poset = SpectrumPoset::new(zz(), vec![int_prime(5)], vec![0], Ambient::Semilocal).unwrap();
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    assert_eq!(cube.entries.len(), 1);
    let e = cube.entry(&Flag::new(vec![0]).unwrap()).unwrap();
    let lc = e.carrier.local_core().unwrap();
    assert!(lc.is_completed());
}

#[test]
fn kxy_chain_cube_has_seven_entries_one_chain_each() {
    let poset = kxy_chain_poset();
    let cube = build_adelic_cube(&unit_z().with_carrier(RingExpr::base(qxy())), &poset);
    let cube = match cube {
        Ok(c) => c,
        Err(e) => panic!("{e}"),
    };
    assert_eq!(cube.entries.len(), 7);
    for (flag, chains) in poset.enumerate_flags() {
        assert_eq!(chains.len(), 1, "flag {flag}");
    }
}

#[test]
fn chain_factors_collapse_to_localized_completions() {
    // finite-primes collapse: each factor of a semilocal entry normalizes
    // to the localization of the completed local ring along its chain
    let poset = hasse_poset(&[2, 3], Ambient::Semilocal);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let corner = cube.entry(&Flag::new(vec![1, 0]).unwrap()).unwrap();
    let factors = instantiate_chains(&corner.carrier, &poset);
    assert_eq!(factors.len(), 2, "two chains (0) inside (2), (0) inside (3)");
    let mut got: Vec<String> = factors.iter().map(|(_, e)| e.to_string()).collect();
    got.sort();
    let flag = Flag::new(vec![1, 0]).unwrap();
    let mut want: Vec<String> = poset
        .chains_for(&flag)
        .iter()
        .map(|c| chain_carrier(&poset, c, CubeVariant::Adelic).to_string())
        .collect();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn bp_square_normalizes_to_the_adelic_square_in_dimension_one() {
    let poset = hasse_poset(&[2], Ambient::Semilocal);
    let adelic = build_adelic_cube(&unit_z(), &poset).unwrap();
    let bp = build_bp_cube(&unit_z(), &poset).unwrap();
    for flag in adelic.flags() {
        let a = adelic.entry(&flag).unwrap();
        let b = bp.entry(&flag).unwrap();
        assert_eq!(
            normalize(&a.carrier),
            normalize(&b.carrier),
            "flag {flag}"
        );
    }
}

#[test]
fn cochain_law_passes_on_the_hasse_square() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let report = check_cochain_law(&cube).unwrap();
    assert!(report.pass());
    assert_eq!(report.checks.len(), 1);
}

#[test]
fn cochain_law_on_the_chain_cube_checks_three_pairs_at_the_top() {
    let poset = kxy_chain_poset();
    let m = BoundedComplex::unit(RingExpr::base(qxy()), qxy().core());
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = check_cochain_law(&cube).unwrap();
    assert!(report.pass());
    let top_checks: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.flag == "(2>1>0)")
        .collect();
    assert_eq!(top_checks.len(), 3);
    assert!(top_checks
        .iter()
        .any(|c| c.class.contains("three-by-three")));
}

#[test]
fn corrupted_face_is_detected() {
    let poset = hasse_poset(&[2], Ambient::Full);
    let mut cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let flag = Flag::new(vec![1, 0]).unwrap();
    cube.corrupt_face(&flag, 0);
    let report = check_cochain_law(&cube).unwrap();
    assert!(!report.pass());
    assert_eq!(report.violations[0].flag, "(1>0)");
}

#[test]
fn cube_of_unit_tensored_matches_cube_of_coefficient() {
    // the cube of the unit tensored with a coefficient agrees with the
    // cube of that coefficient after reduction
    use crate::complex::{homology_table, tensor};
    let poset = hasse_poset(&[2, 3], Ambient::Semilocal);
    let core = CoreRing::IntegersLocalized { primes: vec![2.into(), 3.into()] };
    let m = BoundedComplex::cyclic(RingExpr::base(zz()), core.clone(), &core.from_i64(6));
    let unit = BoundedComplex::unit(RingExpr::base(zz()), core.clone());
    let cube_unit = build_adelic_cube(&unit, &poset).unwrap();
    let cube_m = build_adelic_cube(&m, &poset).unwrap();
    for flag in cube_m.flags() {
        let e_unit = cube_unit.entry(&flag).unwrap();
        let e_m = cube_m.entry(&flag).unwrap();
        assert_eq!(e_unit.carrier, e_m.carrier, "carriers differ at {flag}");
        if e_m.carrier.local_core().is_some() {
            let tensored = tensor(&e_unit.clone(), &m.base_changed(&e_unit.core).unwrap_or_else(|| m.clone()).with_carrier(e_unit.carrier.clone())).unwrap();
            let t1 = homology_table(&tensored).unwrap();
            let t2 = homology_table(e_m).unwrap();
            assert_eq!(t1.entries, t2.entries, "homology differs at {flag}");
        }
    }
}

#[test]
fn cubes_serialize_to_json() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let v = serde_json::to_value(&cube).unwrap();
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
    assert!(v["faces"].as_array().unwrap().len() >= 2);
    // round the serialization twice for byte stability
    let s1 = serde_json::to_string(&cube).unwrap();
    let s2 = serde_json::to_string(&cube).unwrap();
    assert_eq!(s1, s2);
}
