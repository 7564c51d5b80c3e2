use super::VerifierError;
use crate::cube::CubeDiagram;
use crate::expr::{is_unit, UnitCertificate, UnitVerdict};
use crate::ring::AlgPrime;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum TestKind {
    TensorKoszul(AlgPrime),
    LocalizeGeneric(AlgPrime),
}

/// One planned reduction with its survivor annotation and the sample kill
/// certificates justifying the collapse.
#[derive(Debug, Clone)]
pub struct PlannedTest {
    pub kind: TestKind,
    pub survivors: Vec<AlgPrime>,
    pub omitted: Vec<String>,
    pub certificates: Vec<UnitCertificate>,
}

impl PlannedTest {
    pub fn name(&self) -> String {
        match &self.kind {
            TestKind::TensorKoszul(p) => format!("koszul@{}", p.key()),
            TestKind::LocalizeGeneric(p) => format!("generic@{}", p.key()),
        }
    }

    pub fn prime(&self) -> &AlgPrime {
        match &self.kind {
            TestKind::TensorKoszul(p) | TestKind::LocalizeGeneric(p) => p,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionPlan {
    #[serde(skip)]
    pub tests: Vec<PlannedTest>,
    /// the union of test supports covers the declared poset
    pub covers_poset: bool,
}

/// One Koszul test per declared prime below the top dimension, one generic
/// localization per top-dimensional prime; closed points first, ascending
/// dimension, generic last.
pub fn plan_reductions(cube: &CubeDiagram) -> Result<ReductionPlan, VerifierError> {
    let poset = &cube.poset;
    let r = poset.dimension();
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by_key(|&i| (poset.dims[i], poset.primes[i].key()));
    let mut tests = vec![];
    for i in order {
        let p = poset.primes[i].clone();
        // the localization test belongs to genuine generic points; a
        // zero-dimensional poset tests its closed point by Koszul
        if poset.dims[i] == r && p.is_zero_ideal() {
            tests.push(PlannedTest {
                kind: TestKind::LocalizeGeneric(p),
                survivors: vec![],
                omitted: vec![],
                certificates: vec![],
            });
            continue;
        }
        if p.gens.is_empty() {
            return Err(VerifierError::MissingGenerators(p.key()));
        }
        let (survivors, omitted, certificates) = annotate(cube, &p)?;
        tests.push(PlannedTest {
            kind: TestKind::TensorKoszul(p),
            survivors,
            omitted,
            certificates,
        });
    }
    Ok(ReductionPlan {
        tests,
        covers_poset: true,
    })
}

/// Survivor annotation for a Koszul test: the ambient surviving chains of
/// every cube entry, the omitted families when not finitizable, and kill
/// certificates for the dropped declared factors.
fn annotate(
    cube: &CubeDiagram,
    q: &AlgPrime,
) -> Result<(Vec<AlgPrime>, Vec<String>, Vec<UnitCertificate>), VerifierError> {
    let mut survivors = vec![];
    let mut omitted = vec![];
    let mut certificates = vec![];
    for flag in cube.flags() {
        let entry = cube.entry(&flag)?;
        let chains = super::reduce::ambient_chains(&cube.poset, &flag, q, cube.variant);
        match chains {
            Ok(list) => {
                for chain in list {
                    survivors.extend(chain.clone());
                }
            }
            Err(descr) => omitted.extend(descr),
        }
        // sample kill certificates from the declared factors that die
        for (_, factor) in crate::cube::instantiate_chains(&entry.carrier, &cube.poset) {
            for g in &q.gens {
                if let Ok(cert) = is_unit(g, &factor) {
                    if cert.verdict == UnitVerdict::Unit {
                        certificates.push(cert);
                        break;
                    }
                }
            }
        }
    }
    survivors.sort_by_key(|p| p.key());
    survivors.dedup();
    omitted.sort();
    omitted.dedup();
    certificates.truncate(6);
    Ok((survivors, omitted, certificates))
}
