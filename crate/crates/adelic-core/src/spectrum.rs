//! Finite prime posets with dimension functions: the algebraic coordinates
//! of (a declared subposet of) the spectrum, flags of dimensions, and the
//! family/cofamily closures.
//!
//! The order convention throughout: closed points are the algebraically
//! maximal primes and carry dimension 0; the spectrum order used for
//! closures and chains is the reverse of algebraic containment.

use crate::ring::{AlgPrime, BaseRing};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("unknown prime {0}")]
    UnknownPrime(String),
    #[error("declared containment {0} < {1} fails ideal membership")]
    FalseContainment(String, String),
    #[error("dimension not strictly monotone: {0} (dim {1}) inside {2} (dim {3})")]
    NonMonotoneDimension(String, u32, String, u32),
    #[error("closed point {0} declared with nonzero dimension {1}")]
    ClosedPointDimension(String, u32),
    #[error("prime {0} declared twice")]
    DuplicatePrime(String),
    #[error("poset is empty")]
    Empty,
}

/// Whether the declared poset is the whole spectrum of the intended ambient
/// ring (products over its primes are finite) or a finite window into an
/// infinite spectrum (products stay symbolic families).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Full,
    Semilocal,
}

/// A validated finite poset of primes with a dimension function.
#[derive(Debug, Clone)]
pub struct SpectrumPoset {
    pub base: BaseRing,
    pub primes: Vec<AlgPrime>,
    pub dims: Vec<u32>,
    pub ambient: Ambient,
    /// strict algebraic containment: contains[i][j] = primes i strictly
    /// inside prime j (as ideals)
    contains: Vec<Vec<bool>>,
    pub warnings: Vec<String>,
}

/// A strictly decreasing list of dimensions indexing a cube vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag(pub Vec<u32>);

impl Flag {
    pub fn new(dims: Vec<u32>) -> Option<Flag> {
        if dims.is_empty() || dims.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        Some(Flag(dims))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Remove the entry at `pos`; None if that would empty the flag.
    pub fn omit(&self, pos: usize) -> Option<Flag> {
        if self.0.len() <= 1 {
            return None;
        }
        let mut dims = self.0.clone();
        dims.remove(pos);
        Some(Flag(dims))
    }

    /// Insert a dimension, keeping strict decrease; returns the position.
    pub fn insert(&self, dim: u32) -> Option<(Flag, usize)> {
        if self.0.contains(&dim) {
            return None;
        }
        let mut dims = self.0.clone();
        let pos = dims.iter().position(|&d| d < dim).unwrap_or(dims.len());
        dims.insert(pos, dim);
        Some((Flag(dims), pos))
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(">"))
    }
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl SpectrumPoset {
    pub fn new(
        base: BaseRing,
        primes: Vec<AlgPrime>,
        dims: Vec<u32>,
        ambient: Ambient,
    ) -> Result<SpectrumPoset, SpectrumError> {
        if primes.is_empty() {
            return Err(SpectrumError::Empty);
        }
        assert_eq!(primes.len(), dims.len());
        for i in 0..primes.len() {
            for j in 0..i {
                if primes[i] == primes[j] {
                    return Err(SpectrumError::DuplicatePrime(primes[i].key()));
                }
            }
        }
        // derive strict algebraic containment from ideal membership
        let n = primes.len();
        let mut contains = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && primes[j].contains_prime(&primes[i]) {
                    contains[i][j] = true;
                }
            }
        }
        // dimension strictly drops as ideals grow
        for i in 0..n {
            for j in 0..n {
                if contains[i][j] && dims[j] >= dims[i] {
                    return Err(SpectrumError::NonMonotoneDimension(
                        primes[j].key(),
                        dims[j],
                        primes[i].key(),
                        dims[i],
                    ));
                }
            }
        }
        // closed points: algebraically maximal within the declared poset
        for i in 0..n {
            let is_closed = (0..n).all(|j| !contains[i][j]);
            if is_closed && dims[i] != 0 {
                return Err(SpectrumError::ClosedPointDimension(
                    primes[i].key(),
                    dims[i],
                ));
            }
        }
        let mut warnings = vec![];
        // cross-check declared dims against in-poset chain lengths
        let mut poset = SpectrumPoset {
            base,
            primes,
            dims,
            ambient,
            contains,
            warnings: vec![],
        };
        for i in 0..n {
            let depth = poset.chain_depth(i);
            if poset.dims[i] != depth {
                warnings.push(format!(
                    "prime {} declared dim {} but realizes in-poset chain length {}",
                    poset.primes[i].key(),
                    poset.dims[i],
                    depth
                ));
            }
        }
        poset.warnings = warnings;
        Ok(poset)
    }

    /// longest chain of strictly smaller-dimensional primes under i
    fn chain_depth(&self, i: usize) -> u32 {
        let below: Vec<usize> = (0..self.primes.len())
            .filter(|&j| self.contains[i][j])
            .collect();
        below.iter().map(|&j| 1 + self.chain_depth(j)).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// top dimension of the declared poset
    pub fn dimension(&self) -> u32 {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, p: &AlgPrime) -> Option<usize> {
        self.primes.iter().position(|q| q == p)
    }

    pub fn dim_of(&self, p: &AlgPrime) -> Result<u32, SpectrumError> {
        self.index_of(p)
            .map(|i| self.dims[i])
            .ok_or_else(|| SpectrumError::UnknownPrime(p.key()))
    }

    /// strict algebraic containment within the poset
    pub fn strictly_inside(&self, small: usize, large: usize) -> bool {
        self.contains[small][large]
    }

    pub fn primes_of_dim(&self, d: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dims[i] == d).collect()
    }

    /// generic points: the top-dimensional primes
    pub fn generic_points(&self) -> Vec<usize> {
        self.primes_of_dim(self.dimension())
    }

    /// specialization closure in the spectrum order: all primes whose ideal
    /// contains the given one (a family).
    pub fn lambda_set(&self, p: &AlgPrime) -> Result<Vec<AlgPrime>, SpectrumError> {
        let i = self
            .index_of(p)
            .ok_or_else(|| SpectrumError::UnknownPrime(p.key()))?;
        let mut out = vec![self.primes[i].clone()];
        for j in 0..self.len() {
            if self.contains[i][j] {
                out.push(self.primes[j].clone());
            }
        }
        out.sort_by_key(|q| q.key());
        Ok(out)
    }

    /// generization closure: all primes whose ideal is contained in the
    /// given one (a cofamily).
    pub fn v_set(&self, p: &AlgPrime) -> Result<Vec<AlgPrime>, SpectrumError> {
        let i = self
            .index_of(p)
            .ok_or_else(|| SpectrumError::UnknownPrime(p.key()))?;
        let mut out = vec![self.primes[i].clone()];
        for j in 0..self.len() {
            if self.contains[j][i] {
                out.push(self.primes[j].clone());
            }
        }
        out.sort_by_key(|q| q.key());
        Ok(out)
    }

    /// All flags of the dimension range with, per flag, every realizing
    /// chain of declared primes (level k holds a prime of the flag's k-th
    /// dimension, each level algebraically inside the next).
    pub fn enumerate_flags(&self) -> Vec<(Flag, Vec<Vec<usize>>)> {
        let r = self.dimension();
        let mut flags: Vec<Flag> = vec![];
        for mask in 1u64..(1 << (r + 1)) {
            let mut dims: Vec<u32> = (0..=r).filter(|d| mask & (1 << d) != 0).collect();
            dims.sort_by(|a, b| b.cmp(a));
            flags.push(Flag(dims));
        }
        flags.sort();
        flags
            .into_iter()
            .map(|f| {
                let chains = self.chains_for(&f);
                (f, chains)
            })
            .collect()
    }

    /// Realizing chains for a flag: indices i_0, i_1, ... with
    /// dim(i_k) = flag[k] and ideal(i_k) strictly inside ideal(i_{k+1}).
    pub fn chains_for(&self, flag: &Flag) -> Vec<Vec<usize>> {
        let mut chains: Vec<Vec<usize>> = vec![vec![]];
        for (level, &d) in flag.0.iter().enumerate() {
            let mut next = vec![];
            for chain in &chains {
                for i in self.primes_of_dim(d) {
                    let ok = match chain.last() {
                        None => true,
                        Some(&prev) => self.contains[prev][i],
                    };
                    if ok {
                        let mut c = chain.clone();
                        c.push(i);
                        next.push(c);
                    }
                }
            }
            chains = next;
            let _ = level;
        }
        chains.sort_by_key(|c| {
            c.iter()
                .map(|&i| self.primes[i].key())
                .collect::<Vec<_>>()
        });
        chains
    }

    /// Every declared prime reaches a closed point inside its closure.
    pub fn closures_reach_closed_points(&self) -> bool {
        (0..self.len()).all(|i| {
            self.dims[i] == 0
                || (0..self.len()).any(|j| self.contains[i][j] && self.dims[j] == 0)
        })
    }

    /// The family of primes of dimension at most `d` within the poset.
    pub fn family_of_dim_at_most(&self, d: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dims[i] <= d).collect()
    }

    /// Is the subset (by indices) closed under specialization (ideals
    /// growing) within the poset?
    pub fn is_family(&self, subset: &BTreeSet<usize>) -> bool {
        subset.iter().all(|&i| {
            (0..self.len()).all(|j| !self.contains[i][j] || subset.contains(&j))
        })
    }
}
