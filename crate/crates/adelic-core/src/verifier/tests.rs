use super::*;
use crate::complex::BoundedComplex;
use crate::cube::{build_adelic_cube, CubeVariant, FaceKind, FaceMap};
use crate::expr::RingExpr;
use crate::linalg::Mat;
use crate::ring::{int_prime, AlgPrime, BaseRing, CoreRing};
use crate::spectrum::{Ambient, Flag, SpectrumPoset};
use std::collections::BTreeMap;

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

#[test]
fn plan_for_the_hasse_square() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let plan = plan_reductions(&cube).unwrap();
    let names: Vec<String> = plan.tests.iter().map(|t| t.name()).collect();
    assert_eq!(names, vec!["koszul@(2)", "koszul@(3)", "generic@(0)"]);
    // the koszul test at 2 is annotated with its lone survivor
    assert_eq!(
        plan.tests[0].survivors,
        vec![int_prime(2)],
        "{:?}",
        plan.tests[0].survivors
    );
    assert!(!plan.tests[0].certificates.is_empty());
}

#[test]
fn plan_for_a_zero_dimensional_poset() {
    let poset =
        SpectrumPoset::new(zz(), vec![int_prime(5)], vec![0], Ambient::Semilocal).unwrap();
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let plan = plan_reductions(&cube).unwrap();
    // the closed point is its own top dimension: it gets a koszul test
    assert_eq!(plan.tests.len(), 1);
    assert_eq!(plan.tests[0].name(), "koszul@(5)");
    let r = reduce_and_totalize(&cube, &plan.tests[0]).unwrap();
    assert!(r.outcome.passed(), "{:?}", r.outcome);
}

#[test]
fn hasse_square_is_a_pullback() {
    let poset = hasse_poset(&[2, 3, 5], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::Pullback, "{report:?}");
    for t in &report.tests {
        assert!(t.outcome.passed(), "{:?}", t);
        if let TestOutcome::Acyclic { table } = &t.outcome {
            assert!(table.entries.iter().all(|(_, e)| e.is_zero()));
        }
    }
}

#[test]
fn semilocal_fracture_square_is_a_pullback() {
    let poset = hasse_poset(&[2], Ambient::Semilocal);
    let m = BoundedComplex::unit(
        RingExpr::base(zz()),
        CoreRing::IntegersLocalized { primes: vec![2.into()] },
    );
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::Pullback, "{report:?}");
}

#[test]
fn monotone_refinement_of_the_hasse_square() {
    for ps in [vec![2], vec![2, 3], vec![2, 3, 5]] {
        let poset = hasse_poset(&ps, Ambient::Full);
        let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
        let report = verify_pullback(&cube).unwrap();
        assert_eq!(report.verdict, Verdict::Pullback, "primes {ps:?}");
    }
}

#[test]
fn test_order_does_not_change_the_verdict() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let cube = build_adelic_cube(&unit_z(), &poset).unwrap();
    let plan = plan_reductions(&cube).unwrap();
    let mut verdicts = vec![];
    for permutation in [vec![0, 1, 2], vec![2, 1, 0], vec![1, 2, 0]] {
        let mut all_pass = true;
        for &i in &permutation {
            let r = reduce_and_totalize(&cube, &plan.tests[i]).unwrap();
            all_pass &= r.outcome.passed();
        }
        verdicts.push(all_pass);
    }
    assert!(verdicts.iter().all(|&v| v));
}

/// The corrupted square: the completed factor at (2) replaced by its
/// residue field. The Koszul test must exhibit nonzero homology.
#[test]
fn corrupted_hasse_square_is_not_a_pullback() {
    let poset = hasse_poset(&[2], Ambient::Semilocal);
    let core = CoreRing::IntegersLocalized { primes: vec![2.into()] };
    let m = BoundedComplex::unit(RingExpr::base(zz()), core.clone());
    let mut cube = build_adelic_cube(&m, &poset).unwrap();
    // replace the flag-(0) entry by Z/2 presented over the local core,
    // with the quotient augmentation
    let zp = BoundedComplex::cyclic(
        cube.entry(&Flag::new(vec![0]).unwrap()).unwrap().carrier.clone(),
        core.clone(),
        &core.from_i64(2),
    );
    cube.entries.insert(Flag::new(vec![0]).unwrap(), zp.clone());
    // corner: the corrupted entry rationalized
    let corner_carrier = cube
        .entry(&Flag::new(vec![1, 0]).unwrap())
        .unwrap()
        .carrier
        .clone();
    cube.entries.insert(
        Flag::new(vec![1, 0]).unwrap(),
        zp.with_carrier(corner_carrier),
    );
    // augmentation into (0): the quotient map unit -> [R ->2 R]
    let quot = FaceMap {
        kind: FaceKind::Augmentation,
        spot: 0,
        comps: vec![(0, Mat::identity(&core, 1))],
    };
    cube.augmentations.insert(Flag::new(vec![0]).unwrap(), quot);
    let mut faces = BTreeMap::new();
    for ((f, s), face) in cube.faces.clone() {
        if f == Flag::new(vec![1, 0]).unwrap() && s == 1 {
            // face from (1) = rationals into the corner: zero map
            faces.insert(
                (f, s),
                FaceMap {
                    kind: FaceKind::Coefficient,
                    spot: 1,
                    comps: vec![],
                },
            );
        } else if f == Flag::new(vec![1, 0]).unwrap() && s == 0 {
            faces.insert(
                (f, s),
                FaceMap {
                    kind: FaceKind::LocalizeUnit,
                    spot: 0,
                    comps: vec![
                        (0, Mat::identity(&core, 1)),
                        (1, Mat::identity(&core, 1)),
                    ],
                },
            );
        } else {
            faces.insert((f, s), face);
        }
    }
    cube.faces = faces;
    cube.variant = CubeVariant::Custom;
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::NotPullback, "{report:?}");
    let witness = report
        .tests
        .iter()
        .find(|t| matches!(t.outcome, TestOutcome::NonAcyclic { .. }));
    match witness {
        Some(t) => {
            if let TestOutcome::NonAcyclic { table } = &t.outcome {
                assert!(!table.is_acyclic());
            }
        }
        None => panic!("no nonzero homology witness: {report:?}"),
    }
}

#[test]
fn bp_square_equivalence_over_the_local_integers() {
    let poset = hasse_poset(&[2], Ambient::Semilocal);
    let m = BoundedComplex::unit(
        RingExpr::base(zz()),
        CoreRing::IntegersLocalized { primes: vec![2.into()] },
    );
    let report = verify_bp_equivalence(&poset, &m).unwrap();
    assert!(report.equivalent, "{report:?}");
    assert!(report.flags.iter().all(|(_, ok)| *ok));
}

#[test]
fn bp_square_equivalence_over_the_integers() {
    let poset = hasse_poset(&[2, 3], Ambient::Full);
    let report = verify_bp_equivalence(&poset, &unit_z()).unwrap();
    assert!(report.equivalent, "{report:?}");
}

/// Conservativity at desk scale: a complex over the semilocal core is
/// acyclic exactly when every planned test reduces it to zero.
#[test]
fn planned_tests_are_conservative_on_seeded_complexes() {
    let mut state = 0x3c6ef372fe94f82bu64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let core = CoreRing::IntegersLocalized { primes: vec![2.into(), 3.into()] };
    let carrier = RingExpr::base(zz());
    for _ in 0..50 {
        let mut m = BoundedComplex::zero(carrier.clone(), core.clone());
        for _ in 0..(1 + next() % 2) {
            let n = 1 + (next() % 36) as i64;
            let c = BoundedComplex::cyclic(carrier.clone(), core.clone(), &core.from_i64(n));
            m = crate::complex::direct_sum(&m, &c).unwrap();
        }
        let direct = crate::complex::is_acyclic(&m).unwrap();
        // the planned tests of the coefficient m over this poset
        let mut all_tests_zero = true;
        for p in [int_prime(2), int_prime(3)] {
            let kq = crate::functors::koszul(&crate::functors::KoszulData::of(&p)).unwrap();
            let kq = kq.base_changed(&core).unwrap();
            let t = crate::complex::tensor(&kq, &m).unwrap();
            all_tests_zero &= crate::complex::is_acyclic(&t).unwrap();
        }
        let rational = crate::functors::localize(&AlgPrime::zero_ideal(zz()), &m).unwrap();
        all_tests_zero &= crate::complex::is_acyclic(&rational).unwrap();
        assert_eq!(direct, all_tests_zero);
    }
}

fn kxy_chain_poset() -> SpectrumPoset {
    use crate::ring::{parse_elem, FieldSpec};
    let ring = BaseRing::BivariatePoly {
        coeff: FieldSpec::Rationals,
    };
    let core = ring.core();
    let x = AlgPrime::new(ring.clone(), vec![parse_elem("x", &core).unwrap()], 1).unwrap();
    let m = AlgPrime::new(
        ring.clone(),
        vec![
            parse_elem("x", &core).unwrap(),
            parse_elem("y", &core).unwrap(),
        ],
        2,
    )
    .unwrap();
    SpectrumPoset::new(
        ring.clone(),
        vec![AlgPrime::zero_ideal(ring), x, m],
        vec![2, 1, 0],
        Ambient::Full,
    )
    .unwrap()
}

/// The two-dimensional chain: the closed-point test finitizes and is
/// acyclic; the height-one test leaves the closed fiber above it and the
/// verdict weakens to relative.
#[test]
fn chain_cube_over_the_plane_is_a_relative_pullback() {
    let poset = kxy_chain_poset();
    let m = BoundedComplex::unit(RingExpr::base(poset.base.clone()), poset.base.core());
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::RelativePullback, "{report:?}");
    let closed = report
        .tests
        .iter()
        .find(|t| t.test == "koszul@(x,y)")
        .unwrap();
    assert!(
        matches!(&closed.outcome, TestOutcome::Acyclic { .. }),
        "{closed:?}"
    );
    let height_one = report.tests.iter().find(|t| t.test == "koszul@(x)").unwrap();
    match &height_one.outcome {
        TestOutcome::NotFinitizable { omitted } => {
            assert!(
                omitted.iter().any(|d| d.contains("closed points containing (x)")),
                "{omitted:?}"
            );
        }
        other => panic!("expected a relative outcome, got {other:?}"),
    }
    let generic = report.tests.iter().find(|t| t.test == "generic@(0)").unwrap();
    assert!(generic.outcome.passed(), "{generic:?}");
}

/// Front face of the two-dimensional variant comparison: the flags that
/// skip the middle dimension coincide with the standard entries.
#[test]
fn bp_front_face_matches_in_dimension_two() {
    let poset = kxy_chain_poset();
    let m = BoundedComplex::unit(RingExpr::base(poset.base.clone()), poset.base.core());
    let report = verify_bp_equivalence(&poset, &m).unwrap();
    for (flag, ok) in &report.flags {
        if flag.contains('1') {
            continue;
        }
        assert!(ok, "front-face flag {flag} differs");
    }
}

/// Soundness against direct totalization: on a single-core custom square
/// the reduction verdict equals the direct one, on both a pullback and a
/// broken instance.
#[test]
fn reduction_verdict_matches_direct_totalization() {
    use crate::complex::TotalComplexBuilder;
    use crate::cube::{CubeVariant, FaceKind, FaceMap};
    let poset = hasse_poset(&[2], Ambient::Semilocal);
    let core = CoreRing::IntegersLocalized { primes: vec![2.into()] };
    let carrier = RingExpr::base(zz());
    let m = BoundedComplex::unit(carrier.clone(), core.clone());
    for broken in [false, true] {
        let mut cube = build_adelic_cube(&m, &poset).unwrap();
        cube.variant = CubeVariant::Custom;
        // constant square at the unit over one core
        for flag in cube.flags() {
            cube.entries.insert(flag.clone(), m.clone());
        }
        let ident = |kind, spot| FaceMap {
            kind,
            spot,
            comps: vec![(0, Mat::identity(&core, 1))],
        };
        let corner = Flag::new(vec![1, 0]).unwrap();
        // the broken instance doubles both corner faces: the square still
        // commutes but the corner map is no longer an equivalence mod 2
        let scale = if broken { 2 } else { 1 };
        let scaled = |kind, spot| FaceMap {
            kind,
            spot,
            comps: vec![(0, Mat::scalar_diag(&core, 1, &core.from_i64(scale)))],
        };
        cube.faces
            .insert((corner.clone(), 0), scaled(FaceKind::LocalizeUnit, 0));
        let second = scaled(FaceKind::Coefficient, 1);
        cube.faces.insert((corner.clone(), 1), second.clone());
        for f in [Flag::new(vec![0]).unwrap(), Flag::new(vec![1]).unwrap()] {
            cube.augmentations.insert(f, ident(FaceKind::Augmentation, 0));
        }
        // direct augmented totalization over the common core
        let mut builder = TotalComplexBuilder::new(carrier.clone(), core.clone());
        let nx = builder.add_node(0, m.clone());
        let na = builder.add_node(1, m.clone());
        let nb = builder.add_node(1, m.clone());
        let nc = builder.add_node(2, m.clone());
        let one = vec![(0, Mat::identity(&core, 1))];
        builder.add_arrow(nx, na, one.clone(), 1).unwrap();
        builder.add_arrow(nx, nb, one.clone(), 1).unwrap();
        builder
            .add_arrow(na, nc, second.comps.clone(), -1)
            .unwrap();
        builder
            .add_arrow(nb, nc, second.comps.clone(), 1)
            .unwrap();
        let direct_acyclic = crate::complex::is_acyclic(&builder.build().unwrap()).unwrap();
        let report = verify_pullback(&cube).unwrap();
        let reduced_pass = report.verdict == Verdict::Pullback;
        assert_eq!(direct_acyclic, reduced_pass, "broken={broken}: {report:?}");
    }
}

fn kx_poset(ambient: Ambient) -> SpectrumPoset {
    use crate::ring::{parse_elem, FieldSpec};
    let ring = BaseRing::UnivariatePoly {
        coeff: FieldSpec::Rationals,
    };
    let core = ring.core();
    let x = AlgPrime::new(ring.clone(), vec![parse_elem("x", &core).unwrap()], 1).unwrap();
    let x1 = AlgPrime::new(
        ring.clone(),
        vec![parse_elem("x - 1", &core).unwrap()],
        1,
    )
    .unwrap();
    SpectrumPoset::new(
        ring.clone(),
        vec![AlgPrime::zero_ideal(ring), x, x1],
        vec![1, 0, 0],
        ambient,
    )
    .unwrap()
}

/// The square over the univariate polynomial ring: same shape as the
/// integer case, exercised through the polynomial localized cores.
#[test]
fn polynomial_hasse_square_is_a_pullback() {
    let poset = kx_poset(Ambient::Full);
    let m = BoundedComplex::unit(RingExpr::base(poset.base.clone()), poset.base.core());
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::Pullback, "{report:?}");
    // the variant comparison holds over this base too
    let bp = verify_bp_equivalence(&poset, &m).unwrap();
    assert!(bp.equivalent, "{bp:?}");
}

/// A field base: the one-point spectrum verifies trivially through the
/// generic pairing.
#[test]
fn field_base_verifies_trivially() {
    let ring = BaseRing::Rationals;
    let poset = SpectrumPoset::new(
        ring.clone(),
        vec![AlgPrime::zero_ideal(ring.clone())],
        vec![0],
        Ambient::Semilocal,
    )
    .unwrap();
    let m = BoundedComplex::unit(RingExpr::base(ring.clone()), ring.core());
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::Pullback, "{report:?}");
}

/// The square over a prime-field polynomial ring: Frobenius-certified
/// irreducible primes and modular scalar arithmetic end to end.
#[test]
fn prime_field_polynomial_square_is_a_pullback() {
    use crate::ring::{parse_elem, FieldSpec};
    let ring = BaseRing::UnivariatePoly {
        coeff: FieldSpec::PrimeField { p: 5 },
    };
    let core = ring.core();
    let x = AlgPrime::new(ring.clone(), vec![parse_elem("x", &core).unwrap()], 1).unwrap();
    // x^2 + 2 is irreducible over the field with five elements
    let quad = AlgPrime::new(
        ring.clone(),
        vec![parse_elem("x^2 + 2", &core).unwrap()],
        1,
    )
    .unwrap();
    let poset = SpectrumPoset::new(
        ring.clone(),
        vec![AlgPrime::zero_ideal(ring.clone()), x, quad],
        vec![1, 0, 0],
        Ambient::Full,
    )
    .unwrap();
    let m = BoundedComplex::unit(RingExpr::base(ring.clone()), core);
    let cube = build_adelic_cube(&m, &poset).unwrap();
    let report = verify_pullback(&cube).unwrap();
    assert_eq!(report.verdict, Verdict::Pullback, "{report:?}");
}

#[test]
fn reducible_polynomial_is_rejected_as_a_prime() {
    use crate::ring::{parse_elem, FieldSpec, PrimeError};
    let ring = BaseRing::UnivariatePoly {
        coeff: FieldSpec::PrimeField { p: 5 },
    };
    let core = ring.core();
    // x^2 - 1 factors
    let r = AlgPrime::new(
        ring,
        vec![parse_elem("x^2 - 1", &core).unwrap()],
        1,
    );
    assert!(matches!(r, Err(PrimeError::NotPrime(_))), "{r:?}");
}
