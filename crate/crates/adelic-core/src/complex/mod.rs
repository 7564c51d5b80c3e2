//! Bounded chain complexes of finitely generated free modules over a core
//! ring, carried by a symbolic ring expression: shift, sum, tensor, Hom,
//! mapping cones, totalization of punctured cubes, and exact homology.
//!
//! Sign conventions, fixed once: tensor differentials twist by (-1)^p on
//! the left degree; Hom differentials by (-1)^n on the total degree; the
//! shift by n twists differentials by (-1)^n; cube totalization places a
//! cochain level l at homological degree -l with internal sign (-1)^l and
//! face signs (-1)^position.

mod homology;
#[cfg(test)]
mod tests;
mod ops;
mod total;
mod tower;

pub use homology::{homology_table, is_acyclic, is_quasi_iso, HomologyEntry, HomologyTable};
pub use ops::{cone, direct_sum, dual, hom_complex, shift, tensor, tensor_maps};
pub use total::{TotalComplexBuilder, TotalError};
pub use tower::{koszul_with_carrier, tower_report, KoszulTower, TowerDegree, TowerOutcome, TowerReport};

use crate::expr::RingExpr;
use crate::linalg::Mat;
use crate::ring::{CoreRing, Elem};
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("differentials do not compose to zero at degree {0}")]
    CompositionNonzero(i64),
    #[error("rank mismatch at degree {0}")]
    RankMismatch(i64),
    #[error("carriers cannot be unified: {0} vs {1}")]
    CarrierMismatch(String, String),
    #[error("map does not commute with differentials at degree {0}")]
    NonCommuting(i64),
    #[error("a family product remains in the carrier; reduce first")]
    FamilyProductRemains,
    #[error("source complex is not representable for Hom; no truncation scheme applies")]
    NotRepresentable,
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Groebner(#[from] crate::groebner::GroebnerError),
}

/// A bounded complex of finite free modules. `ranks[k]` is the rank in
/// homological degree `min_deg + k`; `diffs[k]` maps degree
/// `min_deg + k + 1` to `min_deg + k`. The presentation lives over `core`
/// and is interpreted along `carrier` by flat base change.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedComplex {
    pub carrier: RingExpr,
    pub core: CoreRing,
    pub min_deg: i64,
    pub ranks: Vec<usize>,
    pub diffs: Vec<Mat>,
}

impl BoundedComplex {
    pub fn new(
        carrier: RingExpr,
        core: CoreRing,
        min_deg: i64,
        ranks: Vec<usize>,
        diffs: Vec<Mat>,
    ) -> Result<Self, ComplexError> {
        let c = BoundedComplex {
            carrier,
            core,
            min_deg,
            ranks,
            diffs,
        };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), ComplexError> {
        if self.ranks.is_empty() {
            return Ok(());
        }
        if self.diffs.len() + 1 != self.ranks.len() {
            return Err(ComplexError::RankMismatch(self.min_deg));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            if d.rows != self.ranks[k] || d.cols != self.ranks[k + 1] {
                return Err(ComplexError::RankMismatch(self.min_deg + k as i64));
            }
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            if !self.diffs[k].mul(&self.diffs[k + 1]).is_zero() {
                return Err(ComplexError::CompositionNonzero(self.min_deg + k as i64));
            }
        }
        Ok(())
    }

    /// The zero complex.
    pub fn zero(carrier: RingExpr, core: CoreRing) -> Self {
        BoundedComplex {
            carrier,
            core,
            min_deg: 0,
            ranks: vec![],
            diffs: vec![],
        }
    }

    /// The unit: rank one in degree zero.
    pub fn unit(carrier: RingExpr, core: CoreRing) -> Self {
        BoundedComplex {
            carrier,
            core,
            min_deg: 0,
            ranks: vec![1],
            diffs: vec![],
        }
    }

    /// Free module of the given rank in degree zero.
    pub fn free(carrier: RingExpr, core: CoreRing, rank: usize) -> Self {
        BoundedComplex {
            carrier,
            core,
            min_deg: 0,
            ranks: vec![rank],
            diffs: vec![],
        }
    }

    /// Two-term complex (degree 1 -> degree 0) given by a matrix.
    pub fn two_term(carrier: RingExpr, m: Mat) -> Self {
        let core = m.core.clone();
        BoundedComplex {
            carrier,
            core,
            min_deg: 0,
            ranks: vec![m.rows, m.cols],
            diffs: vec![m],
        }
    }

    /// Cyclic module R/(e) presented as coker of multiplication, in degree 0.
    pub fn cyclic(carrier: RingExpr, core: CoreRing, e: &Elem) -> Self {
        let m = Mat::from_rows(&core, vec![vec![e.clone()]]);
        Self::two_term(carrier, m)
    }

    pub fn is_zero_object(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, deg: i64) -> usize {
        let k = deg - self.min_deg;
        if k < 0 || k as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[k as usize]
        }
    }

    /// Differential into the given degree: deg+1 -> deg.
    pub fn diff_into(&self, deg: i64) -> Mat {
        let k = deg - self.min_deg;
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            Mat::zero(&self.core, self.rank_at(deg), self.rank_at(deg + 1))
        }
    }

    /// Drop zero-rank degrees at both ends.
    pub fn trimmed(&self) -> BoundedComplex {
        let mut lo = 0usize;
        let mut hi = self.ranks.len();
        while lo < hi && self.ranks[lo] == 0 {
            lo += 1;
        }
        while hi > lo && self.ranks[hi - 1] == 0 {
            hi -= 1;
        }
        if lo == hi {
            return BoundedComplex::zero(self.carrier.clone(), self.core.clone());
        }
        BoundedComplex {
            carrier: self.carrier.clone(),
            core: self.core.clone(),
            min_deg: self.min_deg + lo as i64,
            ranks: self.ranks[lo..hi].to_vec(),
            diffs: self.diffs[lo..hi.saturating_sub(1).max(lo)].to_vec(),
        }
    }

    /// Reinterpret the presentation over a further-localized core.
    pub fn base_changed(&self, core: &CoreRing) -> Option<BoundedComplex> {
        let diffs = self
            .diffs
            .iter()
            .map(|d| d.base_change(core))
            .collect::<Option<Vec<_>>>()?;
        Some(BoundedComplex {
            carrier: self.carrier.clone(),
            core: core.clone(),
            min_deg: self.min_deg,
            ranks: self.ranks.clone(),
            diffs,
        })
    }

    /// Same complex with a different carrier tag (flat extension of scalars).
    pub fn with_carrier(&self, carrier: RingExpr) -> BoundedComplex {
        BoundedComplex {
            carrier,
            ..self.clone()
        }
    }
}

impl fmt::Display for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_object() {
            return write!(f, "0");
        }
        let terms: Vec<String> = (0..self.ranks.len())
            .rev()
            .map(|k| format!("R^{}[{}]", self.ranks[k], self.min_deg + k as i64))
            .collect();
        write!(f, "{} over {}", terms.join(" -> "), self.carrier)
    }
}

impl Serialize for BoundedComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundedComplex", 5)?;
        st.serialize_field("carrier", &self.carrier)?;
        st.serialize_field("core", &self.core)?;
        st.serialize_field("min_degree", &self.min_deg)?;
        st.serialize_field("ranks", &self.ranks)?;
        st.serialize_field("differentials", &self.diffs)?;
        st.end()
    }
}

/// A degreewise map of complexes, commuting with differentials exactly.
#[derive(Debug, Clone)]
pub struct ComplexMap {
    pub source: BoundedComplex,
    pub target: BoundedComplex,
    /// components[k]: source degree source.min_deg + k -> same total degree
    comps: Vec<Mat>,
    /// structural origin of the map, when it has one
    pub structural: Option<StructuralTag>,
}

/// Structural origins of maps, kept so the reduction engine can rewrite
/// them instead of treating them as opaque matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StructuralTag {
    LocalizationUnit,
    CompletionUnit,
    ProductProjection,
    Identity,
}

impl ComplexMap {
    pub fn new(
        source: BoundedComplex,
        target: BoundedComplex,
        comps_by_degree: Vec<(i64, Mat)>,
        structural: Option<StructuralTag>,
    ) -> Result<Self, ComplexError> {
        if source.core != target.core {
            return Err(ComplexError::CarrierMismatch(
                source.carrier.to_string(),
                target.carrier.to_string(),
            ));
        }
        let mut comps = vec![];
        for k in 0..source.ranks.len() {
            let deg = source.min_deg + k as i64;
            let m = comps_by_degree
                .iter()
                .find(|(d, _)| *d == deg)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| {
                    Mat::zero(&target.core, target.rank_at(deg), source.ranks[k])
                });
            if m.rows != target.rank_at(deg) || m.cols != source.ranks[k] {
                return Err(ComplexError::RankMismatch(deg));
            }
            comps.push(m);
        }
        let map = ComplexMap {
            source,
            target,
            comps,
            structural,
        };
        map.check_commutes()?;
        Ok(map)
    }

    pub fn component(&self, deg: i64) -> Mat {
        let k = deg - self.source.min_deg;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Mat::zero(
                &self.target.core,
                self.target.rank_at(deg),
                self.source.rank_at(deg),
            )
        }
    }

    fn check_commutes(&self) -> Result<(), ComplexError> {
        let lo = self.source.min_deg.min(self.target.min_deg);
        let hi = self.source.max_deg().max(self.target.max_deg());
        for deg in lo..hi {
            // f_deg o d_src(into deg) = d_tgt(into deg) o f_{deg+1}
            let lhs = self.component(deg).mul(&self.source.diff_into(deg));
            let rhs = self.target.diff_into(deg).mul(&self.component(deg + 1));
            if lhs != rhs {
                return Err(ComplexError::NonCommuting(deg));
            }
        }
        Ok(())
    }

    /// Identity-shaped map between complexes with equal presentations.
    pub fn identity_like(
        source: BoundedComplex,
        target: BoundedComplex,
        structural: StructuralTag,
    ) -> Result<Self, ComplexError> {
        let comps: Vec<(i64, Mat)> = (0..source.ranks.len())
            .map(|k| {
                let deg = source.min_deg + k as i64;
                (deg, Mat::identity(&target.core, source.ranks[k]))
            })
            .collect();
        ComplexMap::new(source, target, comps, Some(structural))
    }
}
