use super::{BoundedComplex, ComplexError};
use crate::expr::RingExpr;
use crate::linalg::Mat;
use crate::ring::CoreRing;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TotalError {
    #[error("arrow between cochain levels {0} and {1} must raise the level by one")]
    BadLevels(usize, usize),
    #[error("arrow component shape mismatch at node {0}")]
    BadShape(usize),
    #[error("the assembled differential does not square to zero; a face square fails to commute")]
    NonCommuting,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Assembles the total complex of a finite diagram shaped like a punctured
/// cube: nodes carry complexes at cochain levels, arrows carry degreewise
/// matrices with their cochain signs already applied by the caller.
///
/// A node at cochain level l sits at homological degree -l with internal
/// differential twisted by (-1)^l; the assembled differential must square
/// to zero, which is exactly commutativity of the diagram's squares.
pub struct TotalComplexBuilder {
    core: CoreRing,
    carrier: RingExpr,
    nodes: Vec<(usize, BoundedComplex)>,
    /// (from node index, to node index, sign)
    arrows: Vec<(usize, usize, i64)>,
    arrow_comps: Vec<Vec<(i64, Mat)>>,
}

impl TotalComplexBuilder {
    pub fn new(carrier: RingExpr, core: CoreRing) -> Self {
        TotalComplexBuilder {
            core,
            carrier,
            nodes: vec![],
            arrows: vec![],
            arrow_comps: vec![],
        }
    }

    /// Add a complex at the given cochain level; returns the node index.
    pub fn add_node(&mut self, level: usize, c: BoundedComplex) -> usize {
        self.nodes.push((level, c));
        self.nodes.len() - 1
    }

    /// Add an arrow from node `a` to node `b` (levels l and l+1) with the
    /// given degreewise components and cochain sign.
    pub fn add_arrow(
        &mut self,
        a: usize,
        b: usize,
        comps: Vec<(i64, Mat)>,
        sign: i64,
    ) -> Result<(), TotalError> {
        let (la, _) = &self.nodes[a];
        let (lb, _) = &self.nodes[b];
        if *lb != *la + 1 {
            return Err(TotalError::BadLevels(*la, *lb));
        }
        self.arrows.push((a, b, sign));
        self.arrow_comps.push(comps);
        Ok(())
    }

    pub fn build(self) -> Result<BoundedComplex, TotalError> {
        // total degree n receives (C_i)_{n + l_i}
        let mut min = i64::MAX;
        let mut max = i64::MIN;
        for (l, c) in &self.nodes {
            if c.is_zero_object() {
                continue;
            }
            min = min.min(c.min_deg - *l as i64);
            max = max.max(c.max_deg() - *l as i64);
        }
        if min > max {
            return Ok(BoundedComplex::zero(self.carrier, self.core));
        }
        let node_rank = |i: usize, n: i64| -> usize {
            let (l, c) = &self.nodes[i];
            c.rank_at(n + *l as i64)
        };
        let offset = |i: usize, n: i64| -> usize {
            (0..i).map(|j| node_rank(j, n)).sum()
        };
        let total_rank = |n: i64| -> usize {
            (0..self.nodes.len()).map(|j| node_rank(j, n)).sum()
        };
        let mut ranks = vec![];
        for n in min..=max {
            ranks.push(total_rank(n));
        }
        let mut diffs = vec![];
        for n in min..max {
            let rows = total_rank(n);
            let cols = total_rank(n + 1);
            let mut m = Mat::zero(&self.core, rows, cols);
            // internal differentials with sign (-1)^level
            for (i, (l, c)) in self.nodes.iter().enumerate() {
                let d = c.diff_into(n + *l as i64);
                let d = if l % 2 == 1 { d.neg() } else { d };
                let (ro, co) = (offset(i, n), offset(i, n + 1));
                for r in 0..d.rows {
                    for cidx in 0..d.cols {
                        m.set(ro + r, co + cidx, d.at(r, cidx).clone());
                    }
                }
            }
            // arrows: component at source internal degree n+1+l_a
            for (k, (a, b, sign)) in self.arrows.iter().enumerate() {
                let (la, ca) = &self.nodes[*a];
                let deg = n + 1 + *la as i64;
                let comp = self.arrow_comps[k]
                    .iter()
                    .find(|(d, _)| *d == deg)
                    .map(|(_, m)| m.clone());
                let Some(comp) = comp else { continue };
                if comp.cols != ca.rank_at(deg) || comp.rows != node_rank(*b, n) {
                    return Err(TotalError::BadShape(*a));
                }
                let comp = if *sign < 0 { comp.neg() } else { comp };
                let (ro, co) = (offset(*b, n), offset(*a, n + 1));
                for r in 0..comp.rows {
                    for cidx in 0..comp.cols {
                        let cur = m.at(ro + r, co + cidx).add(comp.at(r, cidx));
                        m.set(ro + r, co + cidx, cur);
                    }
                }
            }
            diffs.push(m);
        }
        match BoundedComplex::new(self.carrier, self.core, min, ranks, diffs) {
            Ok(c) => Ok(c.trimmed()),
            Err(ComplexError::CompositionNonzero(_)) => Err(TotalError::NonCommuting),
            Err(e) => Err(TotalError::Complex(e)),
        }
    }
}
