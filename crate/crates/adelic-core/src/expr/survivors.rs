use super::unit::{is_unit, UnitVerdict};
use super::{FamilyConstraint, PrimeFamily, PrimeSlot, RingExpr};
use crate::ring::{AlgPrime, BaseRing};

/// Ambient solution of "which members of the family survive tensoring with
/// the Koszul object of the test prime": the factor at p survives iff every
/// generator of the test prime lies in p.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbientSurvivors {
    Finite(Vec<AlgPrime>),
    /// the survivor set cannot be enumerated; carries a symbolic description
    Infinite(String),
}

pub fn ambient_survivors(family: &PrimeFamily, test: &AlgPrime) -> AmbientSurvivors {
    let r = family.base.dimension();
    let member_height = r - family.dim;
    let constraint = match &family.constraint {
        FamilyConstraint::None => None,
        FamilyConstraint::Under(c) => Some(c.clone()),
        FamilyConstraint::UnderEnclosing => {
            return AmbientSurvivors::Infinite(format!(
                "unresolved chain constraint in family ({family})"
            ))
        }
    };
    // survivors: height = member_height, containing test, strictly containing
    // the constraint
    if test.height > member_height {
        return AmbientSurvivors::Finite(vec![]);
    }
    if test.height == member_height {
        // the only candidate is the test prime itself
        let ok = match &constraint {
            None => true,
            Some(c) => test.contains_prime(c) && test != c,
        };
        return AmbientSurvivors::Finite(if ok { vec![test.clone()] } else { vec![] });
    }
    // test strictly lower: candidates form an ambient fiber
    match (&family.base, member_height) {
        (_, 0) => {
            // generic member: only the zero ideal, which contains only itself
            AmbientSurvivors::Finite(vec![])
        }
        (BaseRing::Integers, 1) | (BaseRing::UnivariatePoly { .. }, 1) => {
            // test must be (0): every closed point survives
            AmbientSurvivors::Infinite(format!("all primes of dim {}", family.dim))
        }
        (BaseRing::BivariatePoly { .. }, h) => match (test.height, h) {
            (0, 1) => AmbientSurvivors::Infinite("all height-one primes".into()),
            (0, 2) => AmbientSurvivors::Infinite("all closed points".into()),
            (1, 2) => {
                // closed points above a height-one prime
                match &constraint {
                    Some(c) if c.height == 2 => AmbientSurvivors::Finite(vec![]),
                    Some(c) if c.height == 1 && c != test => AmbientSurvivors::Infinite(
                        format!("closed points containing {test} and {c}"),
                    ),
                    _ => AmbientSurvivors::Infinite(format!(
                        "closed points containing {test}"
                    )),
                }
            }
            _ => AmbientSurvivors::Infinite(format!(
                "primes of dim {} containing {test}",
                family.dim
            )),
        },
        _ => AmbientSurvivors::Finite(vec![]),
    }
}

/// Report of the finite prime set surviving the given Koszul tests, with
/// symbolic descriptions of any families that could not be finitized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurvivorReport {
    pub primes: Vec<AlgPrime>,
    pub omitted: Vec<String>,
}

/// The finite set of primes whose product factors survive tensoring by the
/// Koszul objects of the test primes. Sound: families that cannot be
/// finitized are reported in `omitted`, never dropped.
pub fn relevant_primes(expr: &RingExpr, tests: &[AlgPrime]) -> SurvivorReport {
    let mut report = SurvivorReport::default();
    walk(expr, tests, &mut report);
    report.primes.sort_by_key(|p| p.key());
    report.primes.dedup();
    report.omitted.sort();
    report.omitted.dedup();
    report
}

fn walk(expr: &RingExpr, tests: &[AlgPrime], report: &mut SurvivorReport) {
    match expr {
        RingExpr::Base(_) => {}
        RingExpr::Localize(c, _) | RingExpr::Complete(c, _) => walk(c, tests, report),
        RingExpr::FiniteProduct(children) => {
            // each test is its own reduction; survivors aggregate over tests
            for c in children {
                let survives_some = tests.iter().any(|t| !factor_killed(c, t));
                if !survives_some {
                    continue;
                }
                if let Some(p) = tag_prime(c) {
                    report.primes.push(p);
                }
                walk(c, tests, report);
            }
        }
        RingExpr::FamilyProduct { family, template } => {
            for t in tests {
                match ambient_survivors(family, t) {
                    AmbientSurvivors::Finite(ps) => {
                        for p in ps {
                            let inst = template.substitute_var(&p);
                            if !factor_killed(&inst, t) {
                                report.primes.push(p);
                                walk(&inst, tests, report);
                            }
                        }
                    }
                    AmbientSurvivors::Infinite(desc) => report.omitted.push(desc),
                }
            }
        }
    }
}

/// A product factor dies under the test prime iff some generator of the
/// test is a certified unit in the factor ring.
pub fn factor_killed(factor: &RingExpr, test: &AlgPrime) -> bool {
    if test.is_zero_ideal() {
        return false;
    }
    test.gens.iter().any(|g| {
        matches!(
            is_unit(g, factor).map(|c| c.verdict),
            Ok(UnitVerdict::Unit)
        )
    })
}

/// The innermost localization/completion tag of a product-free factor.
fn tag_prime(expr: &RingExpr) -> Option<AlgPrime> {
    match expr {
        RingExpr::Base(_) => None,
        RingExpr::Localize(c, s) | RingExpr::Complete(c, s) => {
            tag_prime(c).or_else(|| s.fixed().cloned())
        }
        RingExpr::FiniteProduct(_) | RingExpr::FamilyProduct { .. } => None,
    }
}

#[allow(dead_code)]
fn slot_prime(s: &PrimeSlot) -> Option<&AlgPrime> {
    s.fixed()
}
