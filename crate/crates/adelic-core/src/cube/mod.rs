//! The approximation cube: carriers of iterated products of localized
//! completed rings indexed by dimension flags, with face maps and the
//! cochain law checker.

mod build;
#[cfg(test)]
mod tests;
mod law;

pub use build::{build_adelic_cube, build_bp_cube, chain_carrier, chain_carrier_primes, entry_carrier};
pub use law::{check_cochain_law, CochainCheck, LawReport, LawViolation};

use crate::complex::BoundedComplex;
use crate::expr::RingExpr;
use crate::linalg::Mat;
use crate::spectrum::{Flag, SpectrumPoset};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CubeError {
    #[error("prime {0} lacks Koszul generators")]
    MissingGenerators(String),
    #[error("flag {0} has no entry")]
    MissingEntry(String),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CubeVariant {
    Adelic,
    BeilinsonParshin,
    /// scenario-provided diagram, used by the negative controls
    Custom,
}

/// Structural kind of a face map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    /// a localization unit at an inserted middle level, with the product
    /// collapse onto the factors below the new prime
    LocalizeUnit,
    /// the coefficient-system map at an inserted innermost level:
    /// completion further down, then the localization unit
    Coefficient,
    /// the augmentation from the initial vertex
    Augmentation,
}

/// A face of the cube: degreewise matrices on the uniform presentation,
/// kept with the structural tag so the verifier can rewrite it.
#[derive(Debug, Clone, Serialize)]
pub struct FaceMap {
    pub kind: FaceKind,
    /// position of the inserted dimension in the target flag
    pub spot: usize,
    pub comps: Vec<(i64, Mat)>,
}

impl FaceMap {
    pub fn component(&self, deg: i64, rows: usize, cols: usize, core: &crate::ring::CoreRing) -> Mat {
        self.comps
            .iter()
            .find(|(d, _)| *d == deg)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| Mat::zero(core, rows, cols))
    }

    pub fn identity_shaped(kind: FaceKind, spot: usize, m: &BoundedComplex) -> FaceMap {
        let comps = (0..m.ranks.len())
            .map(|k| {
                let deg = m.min_deg + k as i64;
                (deg, Mat::identity(&m.core, m.ranks[k]))
            })
            .collect();
        FaceMap { kind, spot, comps }
    }
}

/// The punctured cube of carriers with a coefficient complex: entries per
/// flag, faces per (target flag, inserted position), and the augmentation
/// edges out of the initial vertex.
#[derive(Debug, Clone)]
pub struct CubeDiagram {
    pub variant: CubeVariant,
    pub r: u32,
    pub poset: SpectrumPoset,
    pub coefficient: BoundedComplex,
    pub entries: BTreeMap<Flag, BoundedComplex>,
    pub faces: BTreeMap<(Flag, usize), FaceMap>,
    pub augmentations: BTreeMap<Flag, FaceMap>,
}

impl Serialize for CubeDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CubeDiagram", 6)?;
        st.serialize_field("variant", &self.variant)?;
        st.serialize_field("dimension", &self.r)?;
        st.serialize_field("coefficient", &self.coefficient)?;
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|(f, e)| {
                serde_json::json!({"flag": f.to_string(), "entry": e})
            })
            .collect();
        st.serialize_field("entries", &entries)?;
        let faces: Vec<_> = self
            .faces
            .iter()
            .map(|((f, spot), face)| {
                serde_json::json!({"flag": f.to_string(), "spot": spot, "face": face})
            })
            .collect();
        st.serialize_field("faces", &faces)?;
        let augs: Vec<_> = self
            .augmentations
            .iter()
            .map(|(f, face)| serde_json::json!({"flag": f.to_string(), "face": face}))
            .collect();
        st.serialize_field("augmentations", &augs)?;
        st.end()
    }
}

impl CubeDiagram {
    pub fn entry(&self, flag: &Flag) -> Result<&BoundedComplex, CubeError> {
        self.entries
            .get(flag)
            .ok_or_else(|| CubeError::MissingEntry(flag.to_string()))
    }

    pub fn face(&self, target: &Flag, spot: usize) -> Option<&FaceMap> {
        self.faces.get(&(target.clone(), spot))
    }

    pub fn flags(&self) -> Vec<Flag> {
        self.entries.keys().cloned().collect()
    }

    /// Corrupt one face matrix (testing aid for the negative controls).
    pub fn corrupt_face(&mut self, target: &Flag, spot: usize) {
        if let Some(f) = self.faces.get_mut(&(target.clone(), spot)) {
            f.comps = f
                .comps
                .iter()
                .map(|(d, m)| (*d, m.neg()))
                .collect();
        }
    }
}

/// Expand the product structure of a carrier over the declared poset:
/// the list of realizing chains (as prime keys) with the product-free
/// carrier of each factor, rewrite-normalized.
pub fn instantiate_chains(
    carrier: &RingExpr,
    poset: &SpectrumPoset,
) -> Vec<(Vec<String>, RingExpr)> {
    let mut out = vec![];
    expand(carrier, poset, &mut vec![], &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn expand(
    e: &RingExpr,
    poset: &SpectrumPoset,
    chain: &mut Vec<String>,
    out: &mut Vec<(Vec<String>, RingExpr)>,
) {
    match e {
        RingExpr::FiniteProduct(children) => {
            for c in children {
                match outer_tag_key(c) {
                    Some(key) => {
                        chain.push(key);
                        expand(c, poset, chain, out);
                        chain.pop();
                    }
                    None => expand(c, poset, chain, out),
                }
            }
        }
        RingExpr::FamilyProduct { family, template } => {
            // declared members of the family
            for (i, p) in poset.primes.iter().enumerate() {
                if poset.dims[i] != family.dim {
                    continue;
                }
                let ok = match &family.constraint {
                    crate::expr::FamilyConstraint::None => true,
                    crate::expr::FamilyConstraint::Under(c) => {
                        p.contains_prime(c) && p != c
                    }
                    crate::expr::FamilyConstraint::UnderEnclosing => false,
                };
                if !ok {
                    continue;
                }
                chain.push(p.key());
                let inst = template.substitute_var(p);
                expand(&inst, poset, chain, out);
                chain.pop();
            }
        }
        RingExpr::Localize(child, slot) | RingExpr::Complete(child, slot) => {
            // recurse through to the inner products, reattaching the wrapper
            // around each expanded factor; an empty expansion is a zero ring
            let mut inner = vec![];
            expand(child, poset, chain, &mut inner);
            for (c, sub) in inner {
                let wrapped = match e {
                    RingExpr::Localize(..) => RingExpr::Localize(Box::new(sub), slot.clone()),
                    _ => RingExpr::Complete(Box::new(sub), slot.clone()),
                };
                out.push((c, crate::expr::normalize(&wrapped)));
            }
        }
        RingExpr::Base(_) => out.push((chain.clone(), e.clone())),
    }
}

/// The outermost concrete tag prime of a product factor, used as its chain
/// key when expanding finite products.
fn outer_tag_key(e: &RingExpr) -> Option<String> {
    match e {
        RingExpr::Localize(_, s) | RingExpr::Complete(_, s) => {
            s.fixed().map(|p| p.key())
        }
        _ => None,
    }
}
