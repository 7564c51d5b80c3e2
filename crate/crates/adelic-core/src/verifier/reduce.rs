use super::plan::{PlannedTest, TestKind};
use super::{TestOutcome, VerifierError};
use crate::complex::{
    homology_table, koszul_with_carrier, tensor, tensor_maps, BoundedComplex, ComplexMap,
    TotalComplexBuilder,
};
use crate::cube::{chain_carrier_primes, CubeDiagram, CubeVariant};
use crate::expr::{
    ambient_survivors, factor_killed, localize_core, normalize, AmbientSurvivors,
    FamilyConstraint, PrimeFamily, RingExpr,
};
use crate::ring::AlgPrime;
use crate::spectrum::{Ambient, Flag};

/// The reduced form of one test: its outcome and the kept factor
/// complexes, for cross-variant cone certification.
#[derive(Debug, Clone)]
pub struct ReducedTest {
    pub outcome: TestOutcome,
    pub kept: Vec<(String, Vec<String>, BoundedComplex)>,
}

/// Surviving ambient chains of an entry under a Koszul test: primes level
/// by level, each containing the test prime. Errors carry the symbolic
/// descriptions of families that cannot be finitized.
pub fn ambient_chains(
    poset: &crate::spectrum::SpectrumPoset,
    flag: &Flag,
    q: &AlgPrime,
    variant: CubeVariant,
) -> Result<Vec<Vec<AlgPrime>>, Vec<String>> {
    let _ = variant;
    let mut chains: Vec<Vec<AlgPrime>> = vec![vec![]];
    let mut omitted = vec![];
    let r = poset.dimension();
    for (level, &d) in flag.0.iter().enumerate() {
        let mut next = vec![];
        for chain in &chains {
            let constraint = chain.last().cloned();
            // survival requires the level prime to contain the test prime;
            // deeper levels contain the outermost one automatically
            let finite_level = matches!(poset.ambient, Ambient::Semilocal) || d == r;
            if finite_level {
                for (i, p) in poset.primes.iter().enumerate() {
                    if poset.dims[i] != d {
                        continue;
                    }
                    let chain_ok = match &constraint {
                        None => true,
                        Some(c) => p.contains_prime(c) && p != c,
                    };
                    if chain_ok && p.contains_prime(q) {
                        let mut c = chain.clone();
                        c.push(p.clone());
                        next.push(c);
                    }
                }
            } else {
                let fam = PrimeFamily {
                    base: poset.base.clone(),
                    dim: d,
                    constraint: match &constraint {
                        None => FamilyConstraint::None,
                        Some(c) => FamilyConstraint::Under(c.clone()),
                    },
                };
                match ambient_survivors(&fam, q) {
                    AmbientSurvivors::Finite(ps) => {
                        for p in ps {
                            let chain_ok = match &constraint {
                                None => true,
                                Some(c) => p.contains_prime(c) && &p != c,
                            };
                            if chain_ok {
                                let mut c = chain.clone();
                                c.push(p);
                                next.push(c);
                            }
                        }
                    }
                    AmbientSurvivors::Infinite(desc) => {
                        omitted.push(format!("{desc} (at flag {flag})"));
                    }
                }
            }
        }
        chains = next;
        let _ = level;
    }
    if omitted.is_empty() {
        Ok(chains)
    } else {
        Err(omitted)
    }
}

/// Apply a planned reduction to the cube and totalize the augmented
/// surviving diagram.
pub fn reduce_and_totalize(
    cube: &CubeDiagram,
    planned: &PlannedTest,
) -> Result<ReducedTest, VerifierError> {
    match &planned.kind {
        TestKind::TensorKoszul(q) => koszul_test(cube, q),
        TestKind::LocalizeGeneric(g) => generic_test(cube, g),
    }
}

fn koszul_test(cube: &CubeDiagram, q: &AlgPrime) -> Result<ReducedTest, VerifierError> {
    let poset = &cube.poset;
    let base_core = poset.base.core();
    let common_core = localize_core(&base_core, q);
    let common_carrier = normalize(&RingExpr::base(poset.base.clone()).localize(q.clone()));
    let kq = koszul_with_carrier(
        common_carrier.clone(),
        &common_core,
        &q.gens
            .iter()
            .map(|g| crate::functors::coerce_to_core(g, &common_core))
            .collect::<Vec<_>>(),
    )?;

    // initial vertex: the coefficient tensored with the Koszul object
    let m0 = cube
        .coefficient
        .base_changed(&common_core)
        .ok_or_else(|| {
            VerifierError::FamilyProductRemains(format!(
                "coefficient core {} does not localize at {}",
                cube.coefficient.core,
                q.key()
            ))
        })?;
    let initial = tensor(&kq, &m0)?.with_carrier(common_carrier.clone());

    let mut builder = TotalComplexBuilder::new(common_carrier.clone(), common_core.clone());
    let init_node = builder.add_node(0, initial.clone());
    let mut kept = vec![];
    // node bookkeeping: flag, chain keys, node index, coefficient-side
    // complex over the common core
    let mut nodes: Vec<(Flag, Vec<String>, usize, BoundedComplex)> = vec![];
    let mut omitted_all = vec![];

    for flag in cube.flags() {
        let entry = cube.entry(&flag)?;
        match ambient_chains(poset, &flag, q, cube.variant) {
            Ok(chains) => {
                for chain in chains {
                    let keys: Vec<String> = chain.iter().map(|p| p.key()).collect();
                    let factor_carrier =
                        chain_carrier_primes(&poset.base, &chain, cube.variant);
                    if factor_killed(&factor_carrier, q) {
                        continue;
                    }
                    let e = entry
                        .base_changed(&common_core)
                        .ok_or_else(|| {
                            VerifierError::FamilyProductRemains(format!(
                                "entry at {flag} does not localize at {}",
                                q.key()
                            ))
                        })?
                        .with_carrier(common_carrier.clone());
                    let reduced = tensor(&kq, &e)?.with_carrier(factor_carrier.clone());
                    let node = builder.add_node(flag.len(), reduced.clone());
                    nodes.push((flag.clone(), keys.clone(), node, e));
                    kept.push((flag.to_string(), keys, reduced));
                }
            }
            Err(omitted) => omitted_all.extend(omitted),
        }
    }

    if !omitted_all.is_empty() {
        omitted_all.sort();
        omitted_all.dedup();
        return Ok(ReducedTest {
            outcome: TestOutcome::NotFinitizable {
                omitted: omitted_all,
            },
            kept,
        });
    }

    // arrows: the augmentation into singleton factors, faces between kept
    // flags; all tensored with the Koszul identity
    for (flag, keys, node, e) in &nodes {
        if flag.len() == 1 {
            let comps = match cube.augmentations.get(flag) {
                Some(f) => face_comps_over(f, &common_core),
                None => identity_comps(&m0, &common_core),
            };
            let comps = tensored_comps(&kq, &m0, e, comps)?;
            builder.add_arrow(init_node, *node, comps, 1)?;
            continue;
        }
        for spot in 0..flag.len() {
            let source_flag = flag.omit(spot).expect("len >= 2");
            let source_keys: Vec<String> = keys
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != spot)
                .map(|(_, k)| k.clone())
                .collect();
            let source = nodes
                .iter()
                .find(|(f, k, ..)| f == &source_flag && k == &source_keys);
            let Some((_, _, src_node, src_e)) = source else {
                continue;
            };
            let comps = match cube.face(flag, spot) {
                Some(f) => face_comps_over(f, &common_core),
                None => identity_comps(src_e, &common_core),
            };
            let comps = tensored_comps(&kq, src_e, e, comps)?;
            let sign = if spot % 2 == 0 { 1 } else { -1 };
            builder.add_arrow(*src_node, *node, comps, sign)?;
        }
    }

    let total = builder.build()?;
    let table = homology_table(&total)?;
    let outcome = if table.is_acyclic() {
        TestOutcome::Acyclic { table }
    } else {
        TestOutcome::NonAcyclic { table }
    };
    Ok(ReducedTest { outcome, kept })
}

fn identity_comps(
    m: &BoundedComplex,
    core: &crate::ring::CoreRing,
) -> Vec<(i64, crate::linalg::Mat)> {
    (0..m.ranks.len())
        .map(|k| {
            let deg = m.min_deg + k as i64;
            (deg, crate::linalg::Mat::identity(core, m.ranks[k]))
        })
        .collect()
}

fn face_comps_over(
    face: &crate::cube::FaceMap,
    core: &crate::ring::CoreRing,
) -> Vec<(i64, crate::linalg::Mat)> {
    face.comps
        .iter()
        .map(|(d, m)| (*d, m.base_change(core).unwrap_or_else(|| m.clone())))
        .collect()
}

/// Tensor coefficient-side map components with the Koszul identity.
fn tensored_comps(
    kq: &BoundedComplex,
    src_m: &BoundedComplex,
    dst_m: &BoundedComplex,
    comps: Vec<(i64, crate::linalg::Mat)>,
) -> Result<Vec<(i64, crate::linalg::Mat)>, VerifierError> {
    let f = ComplexMap::new(src_m.clone(), dst_m.clone(), comps, None)?;
    let idk = ComplexMap::identity_like(
        kq.clone(),
        kq.clone(),
        crate::complex::StructuralTag::Identity,
    )?;
    let tensored = tensor_maps(&idk, &f)?;
    Ok((tensored.source.min_deg..=tensored.source.max_deg())
        .map(|d| (d, tensored.component(d)))
        .collect())
}

fn is_identity_shaped(face: &crate::cube::FaceMap, m: &BoundedComplex) -> bool {
    face.comps.iter().all(|(d, mat)| {
        let k = (*d - m.min_deg) as usize;
        m.ranks.get(k).is_some_and(|r| {
            mat.rows == *r && mat.cols == *r && mat.is_identity()
        })
    })
}

fn generic_test(cube: &CubeDiagram, g: &AlgPrime) -> Result<ReducedTest, VerifierError> {
    let poset = &cube.poset;
    let r = poset.dimension();
    let mut pairings = 0usize;
    let mut failures: Vec<String> = vec![];
    // the augmentation pairing: initial -> entry at the generic singleton
    let top_flag = Flag::new(vec![r]).unwrap();
    let top_entry = cube.entry(&top_flag)?;
    let base_carrier = cube.coefficient.carrier.clone();
    let lhs = normalize(&base_carrier.localize(g.clone()));
    let rhs = normalize(&top_entry.carrier.clone().localize(g.clone()));
    let aug_ok = lhs == rhs
        && cube
            .augmentations
            .get(&top_flag)
            .is_some_and(|f| is_identity_shaped(f, &cube.coefficient))
        && top_entry.ranks == cube.coefficient.ranks;
    if aug_ok {
        pairings += 1;
    } else {
        failures.push(format!("initial vertex vs {top_flag}"));
    }
    for flag in cube.flags() {
        if flag.0.contains(&r) {
            continue;
        }
        let (target, spot) = flag.insert(r).expect("r not in flag");
        debug_assert_eq!(spot, 0);
        let src = cube.entry(&flag)?;
        let dst = cube.entry(&target)?;
        let src_l = normalize(&src.carrier.clone().localize(g.clone()));
        let dst_l = normalize(&dst.carrier.clone().localize(g.clone()));
        let face_ok = cube
            .face(&target, 0)
            .is_some_and(|f| is_identity_shaped(f, &cube.coefficient));
        if src_l == dst_l && face_ok && src.ranks == dst.ranks {
            pairings += 1;
        } else {
            failures.push(format!("{flag} vs {target}"));
        }
    }
    if failures.is_empty() {
        return Ok(ReducedTest {
            outcome: TestOutcome::RowsIsomorphic { pairings },
            kept: vec![],
        });
    }
    // fallback: exact factor-by-factor cone tests over the localized core
    match generic_fallback(cube, g) {
        Ok(Some(table)) => Ok(ReducedTest {
            outcome: TestOutcome::NonAcyclic { table },
            kept: vec![],
        }),
        Ok(None) => Ok(ReducedTest {
            outcome: TestOutcome::NotFinitizable {
                omitted: failures
                    .into_iter()
                    .map(|f| format!("generic pairing not structural: {f}"))
                    .collect(),
            },
            kept: vec![],
        }),
        Err(e) => Err(e),
    }
}

/// Exact witness search when the structural pairing fails: the cone of
/// each declared pairing factor map over the generic core. A nonzero cone
/// certifies the failure.
fn generic_fallback(
    cube: &CubeDiagram,
    g: &AlgPrime,
) -> Result<Option<crate::complex::HomologyTable>, VerifierError> {
    let poset = &cube.poset;
    let core = localize_core(&poset.base.core(), g);
    let r = poset.dimension();
    // augmentation pairing first
    let top_flag = Flag::new(vec![r]).unwrap();
    let pairs: Vec<(Option<Flag>, Flag)> = std::iter::once((None, top_flag))
        .chain(cube.flags().into_iter().filter_map(|f| {
            if f.0.contains(&r) {
                None
            } else {
                let (t, _) = f.insert(r)?;
                Some((Some(f), t))
            }
        }))
        .collect();
    for (src_flag, dst_flag) in pairs {
        let src = match &src_flag {
            None => cube.coefficient.clone(),
            Some(f) => cube.entry(f)?.clone(),
        };
        let dst = cube.entry(&dst_flag)?.clone();
        let (Some(s), Some(d)) = (src.base_changed(&core), dst.base_changed(&core)) else {
            return Ok(None);
        };
        let comps = match &src_flag {
            None => cube
                .augmentations
                .get(&dst_flag)
                .map(|f| f.comps.clone())
                .unwrap_or_default(),
            Some(_) => cube
                .face(&dst_flag, 0)
                .map(|f| f.comps.clone())
                .unwrap_or_default(),
        };
        let comps: Vec<(i64, crate::linalg::Mat)> = comps
            .into_iter()
            .map(|(deg, m)| (deg, m.base_change(&core).unwrap_or(m)))
            .collect();
        let map = ComplexMap::new(s, d, comps, None)?;
        let (ok, table) = crate::complex::is_quasi_iso(&map)?;
        if !ok {
            return Ok(Some(table));
        }
    }
    Ok(None)
}
