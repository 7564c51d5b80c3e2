//! Symbolic ring expressions: towers of localizations, completions and
//! (possibly infinite-family) products over a base ring, with the rewrite
//! rules that normalize them and the unit certificates that drive the
//! product-kill reductions.
//!
//! Completed rings are never represented by their elements: a completion
//! tag denotes flat base change from the corresponding local ring, and
//! homology over it is computed on the local core.

mod rewrite;
#[cfg(test)]
mod tests;
mod survivors;
mod unit;

pub use rewrite::{normalize, rewrite_steps};
pub use survivors::{
    ambient_survivors, factor_killed, relevant_primes, AmbientSurvivors, SurvivorReport,
};
pub use unit::{is_unit, UnitCertificate, UnitVerdict};

use crate::ring::{AlgPrime, BaseRing, CoreRing, Elem};
use serde::ser::SerializeMap;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("expression contains a family product; distribute per-factor first")]
    UnsupportedExpression,
    #[error("malformed expression: {0}")]
    InvalidExpr(String),
}

/// A prime slot in a Localize/Complete tag: a concrete prime, or the
/// variable of the nearest enclosing family product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSlot {
    Fixed(AlgPrime),
    Var,
}

impl PrimeSlot {
    pub fn fixed(&self) -> Option<&AlgPrime> {
        match self {
            PrimeSlot::Fixed(p) => Some(p),
            PrimeSlot::Var => None,
        }
    }
}

/// Constraint cutting out a symbolic family of primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyConstraint {
    /// no constraint beyond the dimension
    None,
    /// strictly contains the given prime (algebraic containment)
    Under(AlgPrime),
    /// strictly contains the prime of the enclosing family product
    UnderEnclosing,
}

/// A symbolic family of primes: all primes of the stated poset dimension
/// satisfying the chain constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFamily {
    pub base: BaseRing,
    /// poset dimension of the member primes (0 = closed points)
    pub dim: u32,
    pub constraint: FamilyConstraint,
}

impl fmt::Display for PrimeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "primes of dim {}", self.dim)?;
        match &self.constraint {
            FamilyConstraint::None => Ok(()),
            FamilyConstraint::Under(p) => write!(f, " containing {p}"),
            FamilyConstraint::UnderEnclosing => write!(f, " containing the enclosing prime"),
        }
    }
}

/// Symbolic tower of localizations, completions and products over a base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingExpr {
    Base(BaseRing),
    Localize(Box<RingExpr>, PrimeSlot),
    Complete(Box<RingExpr>, PrimeSlot),
    FiniteProduct(Vec<RingExpr>),
    FamilyProduct {
        family: PrimeFamily,
        template: Box<RingExpr>,
    },
}

impl RingExpr {
    pub fn base(ring: BaseRing) -> Self {
        RingExpr::Base(ring)
    }

    pub fn localize(self, p: AlgPrime) -> Self {
        RingExpr::Localize(Box::new(self), PrimeSlot::Fixed(p))
    }

    pub fn complete(self, p: AlgPrime) -> Self {
        RingExpr::Complete(Box::new(self), PrimeSlot::Fixed(p))
    }

    /// The base ring at the bottom of the tower.
    pub fn base_ring(&self) -> BaseRing {
        match self {
            RingExpr::Base(r) => r.clone(),
            RingExpr::Localize(c, _) | RingExpr::Complete(c, _) => c.base_ring(),
            RingExpr::FiniteProduct(cs) => cs
                .first()
                .map(|c| c.base_ring())
                .expect("empty finite product"),
            RingExpr::FamilyProduct { template, .. } => template.base_ring(),
        }
    }

    pub fn contains_family_product(&self) -> bool {
        match self {
            RingExpr::Base(_) => false,
            RingExpr::Localize(c, _) | RingExpr::Complete(c, _) => c.contains_family_product(),
            RingExpr::FiniteProduct(cs) => cs.iter().any(|c| c.contains_family_product()),
            RingExpr::FamilyProduct { .. } => true,
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            RingExpr::Base(_) => false,
            RingExpr::Localize(c, s) | RingExpr::Complete(c, s) => {
                matches!(s, PrimeSlot::Var) || c.contains_var()
            }
            RingExpr::FiniteProduct(cs) => cs.iter().any(|c| c.contains_var()),
            // vars under a nested family product are bound there
            RingExpr::FamilyProduct { .. } => false,
        }
    }

    /// Instantiate the outermost family variable with a concrete prime.
    pub fn substitute_var(&self, p: &AlgPrime) -> RingExpr {
        match self {
            RingExpr::Base(r) => RingExpr::Base(r.clone()),
            RingExpr::Localize(c, s) => RingExpr::Localize(
                Box::new(c.substitute_var(p)),
                match s {
                    PrimeSlot::Var => PrimeSlot::Fixed(p.clone()),
                    fixed => fixed.clone(),
                },
            ),
            RingExpr::Complete(c, s) => RingExpr::Complete(
                Box::new(c.substitute_var(p)),
                match s {
                    PrimeSlot::Var => PrimeSlot::Fixed(p.clone()),
                    fixed => fixed.clone(),
                },
            ),
            RingExpr::FiniteProduct(cs) => {
                RingExpr::FiniteProduct(cs.iter().map(|c| c.substitute_var(p)).collect())
            }
            RingExpr::FamilyProduct { family, template } => {
                let family = PrimeFamily {
                    base: family.base.clone(),
                    dim: family.dim,
                    constraint: match &family.constraint {
                        FamilyConstraint::UnderEnclosing => {
                            FamilyConstraint::Under(p.clone())
                        }
                        other => other.clone(),
                    },
                };
                RingExpr::FamilyProduct {
                    family,
                    template: template.clone(),
                }
            }
        }
    }

    /// Tree size, the termination measure of the rewrite engine.
    pub fn size(&self) -> usize {
        match self {
            RingExpr::Base(_) => 1,
            RingExpr::Localize(c, _) | RingExpr::Complete(c, _) => 1 + c.size(),
            RingExpr::FiniteProduct(cs) => 1 + cs.iter().map(|c| c.size()).sum::<usize>(),
            RingExpr::FamilyProduct { template, .. } => 1 + template.size(),
        }
    }

    pub fn family_product_count(&self) -> usize {
        match self {
            RingExpr::Base(_) => 0,
            RingExpr::Localize(c, _) | RingExpr::Complete(c, _) => c.family_product_count(),
            RingExpr::FiniteProduct(cs) => {
                cs.iter().map(|c| c.family_product_count()).sum()
            }
            RingExpr::FamilyProduct { template, .. } => 1 + template.family_product_count(),
        }
    }

    /// For a product-free expression: the PID core presenting finitely
    /// generated complexes over it, whether a completion tag was crossed,
    /// and the localization tags from outermost inward.
    pub fn local_core(&self) -> Option<LocalCore> {
        match self {
            RingExpr::Base(r) => Some(LocalCore {
                core: r.core(),
                completed_at: vec![],
                localized_at: vec![],
            }),
            RingExpr::Localize(c, PrimeSlot::Fixed(p)) => {
                let mut lc = c.local_core()?;
                lc.core = localize_core(&lc.core, p);
                lc.localized_at.push(p.clone());
                Some(lc)
            }
            RingExpr::Complete(c, PrimeSlot::Fixed(p)) => {
                let mut lc = c.local_core()?;
                lc.completed_at.push(p.clone());
                Some(lc)
            }
            _ => None,
        }
    }
}

/// The computational shadow of a product-free carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCore {
    pub core: CoreRing,
    pub completed_at: Vec<AlgPrime>,
    pub localized_at: Vec<AlgPrime>,
}

impl LocalCore {
    pub fn is_completed(&self) -> bool {
        !self.completed_at.is_empty()
    }
}

/// Localize a core at a prime's generators. Bivariate cores keep their
/// polynomial arithmetic; the localization lives in the carrier tags.
pub fn localize_core(core: &CoreRing, p: &AlgPrime) -> CoreRing {
    if p.is_zero_ideal() {
        return match core {
            CoreRing::Integers | CoreRing::IntegersLocalized { .. } => CoreRing::Rationals,
            CoreRing::UniPoly { coeff } | CoreRing::UniPolyLocalized { coeff, .. } => {
                CoreRing::UniFunctionField {
                    coeff: coeff.clone(),
                }
            }
            other => other.clone(),
        };
    }
    match core {
        CoreRing::Integers | CoreRing::IntegersLocalized { .. } => {
            let gens: Vec<_> = p.gens.iter().filter_map(|g| match g {
                Elem::Int(n) => Some(n.clone()),
                _ => None,
            }).collect();
            core.localized_at_primes(&gens, &[])
        }
        CoreRing::UniPoly { .. } | CoreRing::UniPolyLocalized { .. } => {
            let gens: Vec<_> = p.gens.iter().filter_map(|g| match g {
                Elem::Uni(f) => Some(f.clone()),
                _ => None,
            }).collect();
            core.localized_at_primes(&[], &gens)
        }
        other => other.clone(),
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Base(r) => write!(f, "{r}"),
            RingExpr::Localize(c, s) => match s {
                PrimeSlot::Fixed(p) => write!(f, "loc[{p}]({c})"),
                PrimeSlot::Var => write!(f, "loc[*]({c})"),
            },
            RingExpr::Complete(c, s) => match s {
                PrimeSlot::Fixed(p) => write!(f, "cpl[{p}]({c})"),
                PrimeSlot::Var => write!(f, "cpl[*]({c})"),
            },
            RingExpr::FiniteProduct(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "prod({})", parts.join(", "))
            }
            RingExpr::FamilyProduct { family, template } => {
                write!(f, "prod[{family}]({template})")
            }
        }
    }
}

impl Serialize for RingExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            RingExpr::Base(r) => {
                m.serialize_entry("node", "base")?;
                m.serialize_entry("ring", &r.to_string())?;
            }
            RingExpr::Localize(c, slot) => {
                m.serialize_entry("node", "localize")?;
                m.serialize_entry("at", &slot_strings(slot))?;
                m.serialize_entry("child", c)?;
            }
            RingExpr::Complete(c, slot) => {
                m.serialize_entry("node", "complete")?;
                m.serialize_entry("at", &slot_strings(slot))?;
                m.serialize_entry("child", c)?;
            }
            RingExpr::FiniteProduct(cs) => {
                m.serialize_entry("node", "finite_product")?;
                m.serialize_entry("children", cs)?;
            }
            RingExpr::FamilyProduct { family, template } => {
                m.serialize_entry("node", "family_product")?;
                m.serialize_entry("family", &family.to_string())?;
                m.serialize_entry("template", template)?;
            }
        }
        m.end()
    }
}

fn slot_strings(slot: &PrimeSlot) -> Vec<String> {
    match slot {
        PrimeSlot::Fixed(p) => p.gens.iter().map(|g| g.to_string()).collect(),
        PrimeSlot::Var => vec!["*".to_string()],
    }
}
