//! Exact linear algebra over PID cores: Smith normal form, homology
//! invariants of two-sided differentials, and presented-module utilities.
//!
//! Routing: every core except k[x,y] goes through SNF; bivariate matrices
//! are handled by the groebner module.

mod mat;
mod presented;
mod snf;

#[cfg(test)]
mod tests;

pub use mat::Mat;
pub use presented::{
    homology_presentation, image_invariants, induced_map_on_homology, invariants_of_cokernel,
    HomologyPresentation,
};
pub use snf::{
    homology_invariants, in_image, kernel_basis, smith_normal_form, LinalgError, SnfResult,
};

use crate::ring::{CoreRing, Elem};
use serde::Serialize;
use std::fmt;

/// Invariants of a finitely generated module over a PID core:
/// a free rank and a divisibility chain of torsion factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleInvariants {
    pub free_rank: usize,
    /// invariant factors, each a non-unit, each dividing the next
    pub torsion: Vec<Elem>,
}

impl ModuleInvariants {
    pub fn zero() -> Self {
        ModuleInvariants {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        ModuleInvariants {
            free_rank: rank,
            torsion: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Check the divisibility chain against a core.
    pub fn check_chain(&self, core: &CoreRing) -> bool {
        self.torsion.iter().all(|t| !core.is_unit(t) && !t.is_zero())
            && self
                .torsion
                .windows(2)
                .all(|w| core.divides(&w[0], &w[1]))
    }

    /// Localize the invariants at a sub-set of primes of the core: keep
    /// only the parts of each torsion factor supported at those primes.
    pub fn localize(&self, core: &CoreRing, target: &CoreRing) -> ModuleInvariants {
        let mut torsion = vec![];
        for t in &self.torsion {
            let e = core
                .base_change(t, target)
                .expect("localization base change");
            let (_, assoc) = target.canonical_associate(&e);
            if !target.is_unit(&assoc) && !assoc.is_zero() {
                torsion.push(assoc);
            }
        }
        ModuleInvariants {
            free_rank: self.free_rank,
            torsion,
        }
    }
}

impl fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = vec![];
        if self.free_rank > 0 {
            parts.push(format!("free^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("R/({t})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
