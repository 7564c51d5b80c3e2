
use super::GroebnerError;
use crate::ring::{deglex_cmp, BPoly, FieldSpec, Mono, Scalar};
use std::cmp::Ordering;

/// A vector of bivariate polynomials: an element of a free module R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct ModVec(pub Vec<BPoly>);

impl ModVec {
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        ModVec(vec![BPoly::zero(field); n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &ModVec) -> ModVec {
        ModVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &ModVec) -> ModVec {
        ModVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn mul_monomial(&self, m: Mono, c: &Scalar) -> ModVec {
        ModVec(self.0.iter().map(|p| p.mul_monomial(m, c)).collect())
    }

    pub fn scale_poly(&self, f: &BPoly) -> ModVec {
        ModVec(self.0.iter().map(|p| p.mul(f)).collect())
    }

    /// Leading term: position-over-term order, smaller position dominant,
    /// degree-lex within a position.
    pub fn leading(&self) -> Option<(usize, Mono, Scalar)> {
        let mut best: Option<(usize, Mono, Scalar)> = None;
        for (pos, p) in self.0.iter().enumerate() {
            if let Some((m, c)) = p.leading_term() {
                match &best {
                    None => best = Some((pos, m, c.clone())),
                    Some((bpos, bm, _)) => {
                        let ord = bpos.cmp(&pos).then(deglex_cmp(&m, bm));
                        // smaller position wins; within position larger monomial wins
                        if pos < *bpos
                            || (pos == *bpos && deglex_cmp(&m, bm) == Ordering::Greater)
                        {
                            let _ = ord;
                            best = Some((pos, m, c.clone()));
                        }
                    }
                }
            }
        }
        best
    }
}

/// A module Groebner basis element with its representation in the original
/// generators (for syzygy extraction).
#[derive(Debug, Clone)]
pub struct TrackedVec {
    pub vec: ModVec,
    pub rep: ModVec,
}

fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    (a.0.max(b.0), a.1.max(b.1))
}

fn mono_div(a: &Mono, b: &Mono) -> Mono {
    (a.0 - b.0, a.1 - b.1)
}

/// Reduce `v` against the tracked basis; returns (remainder, using) where
/// `using` accumulates the quotient combination in the original generators.
fn reduce_tracked(
    v: &ModVec,
    rep: &ModVec,
    basis: &[TrackedVec],
) -> (ModVec, ModVec) {
    let mut work = v.clone();
    let mut wrep = rep.clone();
    'outer: loop {
        let Some((pos, m, c)) = work.leading() else {
            return (work, wrep);
        };
        for b in basis {
            let Some((bpos, bm, bc)) = b.vec.leading() else {
                continue;
            };
            if bpos == pos && BPoly::monomial_divides(&bm, &m) {
                let coef = c.div(&bc);
                let shift = mono_div(&m, &bm);
                work = work.sub(&b.vec.mul_monomial(shift, &coef));
                wrep = wrep.sub(&b.rep.mul_monomial(shift, &coef));
                continue 'outer;
            }
        }
        // leading term irreducible: strip it and keep reducing the tail
        let field = work.0[0].field.clone();
        let mut stripped = ModVec::zero(&field, work.0.len());
        stripped.0[pos] = BPoly::monomial(&field, m, c.clone());
        let (tail, tail_rep) = reduce_tracked(&work.sub(&stripped), &wrep, basis);
        return (stripped.add(&tail), tail_rep);
    }
}

/// Groebner basis of the submodule of R^n generated by `gens`, tracking
/// representations, together with the syzygies discovered en route.
pub fn module_groebner_with_syzygies(
    gens: &[ModVec],
    degree_cap: u32,
) -> Result<(Vec<TrackedVec>, Vec<ModVec>), GroebnerError> {
    let nonzero: Vec<(usize, &ModVec)> = gens
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    if nonzero.is_empty() {
        return Ok((vec![], vec![]));
    }
    let field = nonzero[0].1 .0[0].field.clone();
    let c = gens.len();
    let mut basis: Vec<TrackedVec> = nonzero
        .iter()
        .map(|(i, v)| {
            let mut rep = ModVec::zero(&field, c);
            rep.0[*i] = BPoly::constant(Scalar::one(&field));
            TrackedVec {
                vec: (*v).clone(),
                rep,
            }
        })
        .collect();
    let mut syzygies: Vec<ModVec> = vec![];
    let mut pairs: Vec<(usize, usize)> = vec![];
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (pi, mi, ci) = basis[i].vec.leading().unwrap();
        let (pj, mj, cj) = basis[j].vec.leading().unwrap();
        if pi != pj {
            continue; // S-pairs only for matching leading positions
        }
        let l = mono_lcm(&mi, &mj);
        let ai = mono_div(&l, &mi);
        let aj = mono_div(&l, &mj);
        let s = basis[i]
            .vec
            .mul_monomial(ai, &ci.inv())
            .sub(&basis[j].vec.mul_monomial(aj, &cj.inv()));
        let srep = basis[i]
            .rep
            .mul_monomial(ai, &ci.inv())
            .sub(&basis[j].rep.mul_monomial(aj, &cj.inv()));
        let (r, rrep) = reduce_tracked(&s, &srep, &basis);
        if r.is_zero() {
            if !rrep.is_zero() {
                syzygies.push(rrep);
            }
            continue;
        }
        let deg = r
            .0
            .iter()
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(0);
        if deg > degree_cap {
            return Err(GroebnerError::DegreeBoundExceeded(degree_cap));
        }
        for k in 0..basis.len() {
            pairs.push((k, basis.len()));
        }
        basis.push(TrackedVec { vec: r, rep: rrep });
    }
    Ok((basis, syzygies))
}

/// Module Groebner basis without tracking.
pub fn module_groebner(gens: &[ModVec], degree_cap: u32) -> Result<Vec<ModVec>, GroebnerError> {
    let (basis, _) = module_groebner_with_syzygies(gens, degree_cap)?;
    Ok(basis.into_iter().map(|b| b.vec).collect())
}

/// Membership of `v` in the submodule generated by a module Groebner basis.
pub fn module_membership(v: &ModVec, gb: &[ModVec]) -> bool {
    if v.is_zero() {
        return true;
    }
    let field = v.0[0].field.clone();
    let tracked: Vec<TrackedVec> = gb
        .iter()
        .map(|g| TrackedVec {
            vec: g.clone(),
            rep: ModVec::zero(&field, 1),
        })
        .collect();
    let (r, _) = reduce_tracked(v, &ModVec::zero(&field, 1), &tracked);
    r.is_zero()
}

/// Generators of the syzygy module of the given vectors: the S-pair
/// syzygies of the completed Groebner basis pulled back through the
/// representation matrix, plus the rewriting relations of the original
/// generators through the basis.
pub fn syzygies(gens: &[ModVec], degree_cap: u32) -> Result<Vec<ModVec>, GroebnerError> {
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let field = gens
        .iter()
        .flat_map(|v| v.0.iter())
        .map(|p| p.field.clone())
        .next()
        .unwrap_or(FieldSpec::Rationals);
    let (basis, mut syz) = module_groebner_with_syzygies(gens, degree_cap)?;
    for (i, g) in gens.iter().enumerate() {
        let mut e_i = ModVec::zero(&field, gens.len());
        e_i.0[i] = BPoly::constant(Scalar::one(&field));
        if g.is_zero() {
            syz.push(e_i);
            continue;
        }
        // g reduces to zero through the basis; the leftover representation
        // e_i - B_i A is a syzygy of the generators
        let (r, rrep) = reduce_tracked(g, &e_i, &basis);
        debug_assert!(r.is_zero(), "generator failed to reduce through its basis");
        if !rrep.is_zero() {
            syz.push(rrep);
        }
    }
    Ok(syz)
}

