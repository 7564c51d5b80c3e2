use super::{BoundedComplex, ComplexError, ComplexMap};
use crate::groebner::{degree_cap, groebner_homology, GroebnerHomology};
use crate::linalg::{homology_invariants, ModuleInvariants};
use crate::ring::CoreRing;
use serde::Serialize;

/// Homology of one degree: exact invariant factors over a PID core, or a
/// graded fingerprint over the bivariate ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomologyEntry {
    Invariants(ModuleInvariants),
    Fingerprint(GroebnerHomology),
}

impl HomologyEntry {
    pub fn is_zero(&self) -> bool {
        match self {
            HomologyEntry::Invariants(i) => i.is_zero(),
            HomologyEntry::Fingerprint(f) => f.is_zero,
        }
    }
}

/// Homology in every degree of a bounded complex, with the carrier context
/// it is to be read in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomologyTable {
    pub carrier: String,
    pub completed: bool,
    pub entries: Vec<(i64, HomologyEntry)>,
}

impl HomologyTable {
    pub fn is_acyclic(&self) -> bool {
        self.entries.iter().all(|(_, e)| e.is_zero())
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(d, _)| *d)
            .collect()
    }

    pub fn entry_at(&self, deg: i64) -> Option<&HomologyEntry> {
        self.entries
            .iter()
            .find(|(d, _)| *d == deg)
            .map(|(_, e)| e)
    }
}

/// Exact homology in all degrees. The complex must be reduced: the carrier
/// may not contain a family product.
pub fn homology_table(c: &BoundedComplex) -> Result<HomologyTable, ComplexError> {
    if c.carrier.contains_family_product() {
        return Err(ComplexError::FamilyProductRemains);
    }
    let completed = c
        .carrier
        .local_core()
        .map(|lc| lc.is_completed())
        .unwrap_or(false);
    let mut entries = vec![];
    for k in 0..c.ranks.len() {
        let deg = c.min_deg + k as i64;
        let d_in = c.diff_into(deg);
        let d_out = c.diff_into(deg - 1);
        let entry = match &c.core {
            CoreRing::BiPoly { .. } => HomologyEntry::Fingerprint(groebner_homology(
                &d_in,
                &d_out,
                degree_cap(),
            )?),
            _ => HomologyEntry::Invariants(homology_invariants(&d_in, &d_out)?),
        };
        entries.push((deg, entry));
    }
    Ok(HomologyTable {
        carrier: c.carrier.to_string(),
        completed,
        entries,
    })
}

pub fn is_acyclic(c: &BoundedComplex) -> Result<bool, ComplexError> {
    Ok(homology_table(c)?.is_acyclic())
}

/// Quasi-isomorphism test: the cone is acyclic.
pub fn is_quasi_iso(f: &ComplexMap) -> Result<(bool, HomologyTable), ComplexError> {
    let cone = super::ops::cone(f)?;
    let table = homology_table(&cone)?;
    Ok((table.is_acyclic(), table))
}
