//! The local functors at a prime: Koszul objects, derived torsion,
//! localization, derived completion, the dual localization functor, support
//! and cosupport, and the dimension filtration.
//!
//! Derived completion of finitely generated presentations is flat base
//! change to the completed local core; the Koszul power tower is the
//! independent route and the reporting surface for completed values.

mod filtration;
#[cfg(test)]
mod tests;
mod gamma;
mod support;
mod vfun;

pub use filtration::{dim_filtration, FiltrationReport};
pub use gamma::{gamma, GammaDegree, GammaReport};
pub use support::{cosupport, support, SupportReport};
pub use vfun::{v_functor, VOutcome};

use crate::complex::{
    homology_table, koszul_with_carrier, tower_report, BoundedComplex, ComplexError,
    HomologyTable, TowerReport,
};
use crate::expr::{localize_core, RingExpr};
use crate::ring::{AlgPrime, Elem};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FunctorError {
    #[error("generators {0:?} do not generate the prime {1}")]
    WrongGenerators(Vec<String>, String),
    #[error("prime {0} not in the declared poset")]
    UnknownPrime(String),
    #[error("operation needs a finitely generated core presentation")]
    NotFinitelyGenerated,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Generators for the Koszul object of a prime. Alternative generating
/// sets are accepted when they generate the same ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct KoszulData {
    pub prime: AlgPrime,
    pub generators: Vec<Elem>,
}

impl KoszulData {
    /// Default generators: the prime's own.
    pub fn of(prime: &AlgPrime) -> KoszulData {
        KoszulData {
            prime: prime.clone(),
            generators: prime.koszul_gens(),
        }
    }

    /// Verify the generators generate the prime (equality of ideals for the
    /// restricted prime classes of this engine).
    pub fn verify(&self) -> Result<(), FunctorError> {
        let wrong = || {
            FunctorError::WrongGenerators(
                self.generators.iter().map(|g| g.to_string()).collect(),
                self.prime.key(),
            )
        };
        if self.prime.is_zero_ideal() {
            return if self.generators.is_empty() {
                Ok(())
            } else {
                Err(wrong())
            };
        }
        // every alternative generator must lie in the prime
        if !self.generators.iter().all(|g| self.prime.contains(g)) {
            return Err(wrong());
        }
        // and the prime's generators must lie in the ideal they generate
        if !ideal_contains_all(&self.generators, &self.prime) {
            return Err(wrong());
        }
        Ok(())
    }
}

/// Do the listed elements generate an ideal containing every generator of
/// the prime?
fn ideal_contains_all(gens: &[Elem], prime: &AlgPrime) -> bool {
    use crate::ring::BaseRing;
    match &prime.ring {
        BaseRing::Integers => {
            // ideal = gcd of the integer generators
            use num_bigint::BigInt;
            use num_integer::Integer;
            use num_traits::Zero;
            let mut g = BigInt::zero();
            for e in gens {
                if let Elem::Int(n) = e {
                    g = g.gcd(n);
                }
            }
            prime.gens.iter().all(|t| match t {
                Elem::Int(n) => !g.is_zero() && (n % &g).is_zero(),
                _ => false,
            })
        }
        BaseRing::UnivariatePoly { .. } => {
            let mut g: Option<crate::ring::UPoly> = None;
            for e in gens {
                if let Elem::Uni(f) = e {
                    g = Some(match g {
                        None => f.clone(),
                        Some(acc) => acc.gcd(f),
                    });
                }
            }
            match g {
                Some(g) => prime.gens.iter().all(|t| match t {
                    Elem::Uni(f) => g.divides(f),
                    _ => false,
                }),
                None => false,
            }
        }
        BaseRing::BivariatePoly { .. } => {
            let polys: Vec<crate::ring::BPoly> = gens
                .iter()
                .filter_map(|e| match e {
                    Elem::Bi(p) => Some(p.clone()),
                    _ => None,
                })
                .collect();
            match crate::groebner::buchberger(&polys, crate::groebner::DEFAULT_DEGREE_CAP) {
                Ok(gb) => prime.gens.iter().all(|t| match t {
                    Elem::Bi(p) => crate::groebner::ideal_membership(p, &gb),
                    _ => false,
                }),
                Err(_) => false,
            }
        }
        _ => false,
    }
}

/// The unstable Koszul complex of a prime: the tensor of two-term
/// multiplication complexes on its generators. The zero ideal gives the
/// unit complex.
pub fn koszul(data: &KoszulData) -> Result<BoundedComplex, FunctorError> {
    data.verify()?;
    let ring = data.prime.ring.clone();
    let core = ring.core();
    let carrier = RingExpr::base(ring);
    let gens: Vec<Elem> = data
        .generators
        .iter()
        .map(|g| coerce_to_core(g, &core))
        .collect();
    Ok(koszul_with_carrier(carrier, &core, &gens)?)
}

/// Localization at a prime: exact, smashing; the carrier gains a tag and
/// the presentation moves to the localized core.
pub fn localize(p: &AlgPrime, m: &BoundedComplex) -> Result<BoundedComplex, FunctorError> {
    let core = localize_core(&m.core, p);
    let carrier = m.carrier.clone().localize(p.clone());
    let carrier = crate::expr::normalize(&carrier);
    match m.base_changed(&core) {
        Some(c) => Ok(c.with_carrier(carrier)),
        None => Ok(m.with_carrier(carrier)),
    }
}

/// Derived completion at a prime of a finitely generated presentation:
/// flat base change to the completed local core. Invariants are unchanged;
/// the carrier records the completion.
pub fn complete(p: &AlgPrime, m: &BoundedComplex) -> Result<BoundedComplex, FunctorError> {
    if p.is_zero_ideal() {
        // completion at the generic point is the identity
        return Ok(m.clone());
    }
    let local = localize(p, m)?;
    let carrier = crate::expr::normalize(&local.carrier.clone().complete(p.clone()));
    Ok(local.with_carrier(carrier))
}

/// The tower route to the completed values: the Koszul power tower of the
/// localized complex, with the given stabilization window.
pub fn complete_report(
    p: &AlgPrime,
    m: &BoundedComplex,
    window: usize,
) -> Result<TowerReport, FunctorError> {
    if p.is_zero_ideal() {
        // identity: report the homology of m itself as stable content
        let table = homology_table(m)?;
        return Ok(identity_tower_report(&table, window));
    }
    let local = localize(p, m)?;
    let gens: Vec<Elem> = p
        .gens
        .iter()
        .map(|g| coerce_to_core(g, &local.core))
        .collect();
    Ok(tower_report(&local, &gens, window)?)
}

fn identity_tower_report(table: &HomologyTable, window: usize) -> TowerReport {
    use crate::complex::{TowerDegree, TowerOutcome};
    let degrees = table
        .entries
        .iter()
        .map(|(deg, e)| {
            let outcome = match e {
                crate::complex::HomologyEntry::Invariants(i) => TowerOutcome::Stabilized {
                    completed_rank: i.free_rank,
                    stable_torsion: i.torsion.iter().map(|t| t.to_string()).collect(),
                },
                crate::complex::HomologyEntry::Fingerprint(f) => {
                    if f.is_zero {
                        TowerOutcome::ProZero
                    } else {
                        TowerOutcome::NonMittagLeffler {
                            images_seen: vec!["bivariate fingerprint".into()],
                        }
                    }
                }
            };
            TowerDegree {
                degree: *deg,
                outcome,
            }
        })
        .collect();
    TowerReport { window, degrees }
}

/// Move a base-ring element into a (possibly localized) core.
pub fn coerce_to_core(e: &Elem, core: &crate::ring::CoreRing) -> Elem {
    use crate::ring::CoreRing;
    match (e, core) {
        (Elem::Int(n), CoreRing::Integers) => Elem::Int(n.clone()),
        (Elem::Int(n), CoreRing::IntegersLocalized { .. })
        | (Elem::Int(n), CoreRing::Rationals) => core.from_bigint(n),
        (Elem::Uni(f), CoreRing::UniPoly { .. }) => Elem::Uni(f.clone()),
        (Elem::Uni(f), CoreRing::UniPolyLocalized { coeff, .. })
        | (Elem::Uni(f), CoreRing::UniFunctionField { coeff }) => Elem::UniFrac {
            num: f.clone(),
            den: crate::ring::UPoly::constant(crate::ring::Scalar::one(coeff)),
        },
        (Elem::Bi(f), CoreRing::BiPoly { .. }) => Elem::Bi(f.clone()),
        (e, _) => e.clone(),
    }
}
