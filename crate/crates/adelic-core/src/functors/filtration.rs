use super::gamma::{gamma, GammaReport};
use super::{FunctorError, KoszulData};
use crate::complex::{homology_table, BoundedComplex, HomologyEntry};
use crate::linalg::ModuleInvariants;
use crate::ring::{AlgPrime, BaseRing, CoreRing, Elem};
use crate::spectrum::SpectrumPoset;
use serde::Serialize;

/// The torsion/localization decomposition along the family of primes of
/// dimension at most i: the lower piece is derived torsion at the
/// intersection ideal of the family's algebraically minimal members, the
/// upper piece is the complex with those generators inverted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiltrationReport {
    pub level: u32,
    pub family: Vec<String>,
    pub intersection_gens: Vec<String>,
    pub lower: GammaReport,
    /// invariants of the nullification, read over the inverted core
    pub upper: Vec<(i64, ModuleInvariants)>,
    pub upper_shape: String,
    /// exactness of the decomposition: in each degree the torsion splits
    /// into the primary part (lower) and the surviving part (upper)
    pub exact: bool,
    /// the lower piece is supported in dimension <= level
    pub support_ok: bool,
}

pub fn dim_filtration(
    m: &BoundedComplex,
    level: u32,
    poset: &SpectrumPoset,
) -> Result<FiltrationReport, FunctorError> {
    let members = poset.family_of_dim_at_most(level);
    let family: Vec<String> = members
        .iter()
        .map(|&i| poset.primes[i].key())
        .collect();
    // algebraically minimal members: contained in no other member
    let minimal: Vec<&AlgPrime> = members
        .iter()
        .filter(|&&i| {
            members
                .iter()
                .all(|&j| i == j || !poset.strictly_inside(j, i))
        })
        .map(|&i| &poset.primes[i])
        .collect();
    let gens = intersection_generators(&poset.base, &minimal)?;
    if gens.len() != 1 {
        return Err(FunctorError::NotFinitelyGenerated);
    }
    let g = gens[0].clone();
    // the lower piece: derived torsion at the principal intersection ideal
    let pseudo = KoszulData {
        prime: pseudo_prime(&poset.base, &g),
        generators: vec![g.clone()],
    };
    let lower = gamma_at_element(&pseudo, m)?;
    // the upper piece: invert the generator
    let table = homology_table(m)?;
    let gc = super::coerce_to_core(&g, &m.core);
    let mut upper = vec![];
    let mut exact = true;
    for (deg, e) in &table.entries {
        let HomologyEntry::Invariants(inv) = e else {
            continue;
        };
        let mut surviving = vec![];
        for t in &inv.torsion {
            let stripped = strip_g_part(&m.core, t, &gc);
            if !m.core.is_unit(&stripped) && !stripped.is_zero() {
                surviving.push(stripped);
            }
        }
        // exactness bookkeeping: primary part x surviving part = the factor
        let primary_count = lower
            .degree(*deg)
            .map(|gd| gd.torsion.torsion.len())
            .unwrap_or(0);
        let total_nonunit = inv
            .torsion
            .iter()
            .filter(|t| !m.core.is_unit(t))
            .count();
        if primary_count + surviving.len() < total_nonunit {
            exact = false;
        }
        let up = ModuleInvariants {
            free_rank: inv.free_rank,
            torsion: surviving,
        };
        if !up.is_zero() {
            upper.push((*deg, up));
        }
    }
    // support check: the generator lies in no declared prime of higher dim
    let support_ok = poset
        .primes
        .iter()
        .zip(&poset.dims)
        .filter(|(_, d)| **d > level)
        .all(|(p, _)| !p.contains(&g) || p.is_zero_ideal() && g.is_zero());
    Ok(FiltrationReport {
        level,
        family,
        intersection_gens: gens.iter().map(|e| e.to_string()).collect(),
        lower,
        upper,
        upper_shape: format!("object with {g} inverted"),
        exact,
        support_ok,
    })
}

/// Torsion at a principal ideal that need not be prime: same structural
/// computation as at a prime.
fn gamma_at_element(
    data: &KoszulData,
    m: &BoundedComplex,
) -> Result<GammaReport, FunctorError> {
    gamma(data, m)
}

/// A pseudo-prime wrapper for a principal intersection ideal; membership
/// checks are divisibility, which is all the gamma computation needs.
fn pseudo_prime(base: &BaseRing, g: &Elem) -> AlgPrime {
    AlgPrime {
        ring: base.clone(),
        gens: vec![g.clone()],
        height: 1,
    }
}

fn intersection_generators(
    base: &BaseRing,
    minimal: &[&AlgPrime],
) -> Result<Vec<Elem>, FunctorError> {
    if minimal.is_empty() {
        return Err(FunctorError::NotFinitelyGenerated);
    }
    if minimal.len() == 1 {
        return Ok(minimal[0].gens.clone());
    }
    match base {
        BaseRing::Integers => {
            let mut acc = num_bigint::BigInt::from(1);
            for p in minimal {
                match p.gens.first() {
                    Some(Elem::Int(n)) => acc *= n,
                    _ => return Err(FunctorError::NotFinitelyGenerated),
                }
            }
            Ok(vec![Elem::Int(acc)])
        }
        BaseRing::UnivariatePoly { .. } => {
            let mut acc: Option<crate::ring::UPoly> = None;
            for p in minimal {
                match p.gens.first() {
                    Some(Elem::Uni(f)) => {
                        acc = Some(match acc {
                            None => f.clone(),
                            Some(a) => a.mul(f),
                        })
                    }
                    _ => return Err(FunctorError::NotFinitelyGenerated),
                }
            }
            Ok(vec![Elem::Uni(acc.unwrap())])
        }
        BaseRing::BivariatePoly { .. } => {
            let ideals: Vec<Vec<crate::ring::BPoly>> = minimal
                .iter()
                .map(|p| {
                    p.gens
                        .iter()
                        .filter_map(|e| match e {
                            Elem::Bi(f) => Some(f.clone()),
                            _ => None,
                        })
                        .collect()
                })
                .collect();
            match crate::groebner::ideal_intersection(
                &ideals,
                crate::groebner::DEFAULT_DEGREE_CAP,
            ) {
                Ok(Some(gens)) => Ok(gens.into_iter().map(Elem::Bi).collect()),
                _ => Err(FunctorError::NotFinitelyGenerated),
            }
        }
        _ => Err(FunctorError::NotFinitelyGenerated),
    }
}

fn strip_g_part(core: &CoreRing, t: &Elem, g: &Elem) -> Elem {
    use crate::ring::{int_valuation, poly_valuation};
    match (t, g) {
        (Elem::Int(n), Elem::Int(p)) => {
            let mut rest = n.clone();
            // strip every prime factor shared with g, not just g itself
            let mut shared = num_integer::Integer::gcd(&rest, p);
            while num_traits::Signed::abs(&shared) > num_bigint::BigInt::from(1) {
                rest /= &shared;
                shared = num_integer::Integer::gcd(&rest, p);
            }
            Elem::Int(rest)
        }
        (Elem::Rat(q), Elem::Rat(p)) => {
            let v = int_valuation(q.numer(), p.numer());
            let mut rest = q.clone();
            for _ in 0..v {
                rest /= p;
            }
            Elem::Rat(rest)
        }
        (Elem::Uni(f), Elem::Uni(p)) => {
            let mut rest = f.clone();
            let mut shared = rest.gcd(p);
            while shared.degree().unwrap_or(0) > 0 {
                rest = rest.divrem(&shared).0;
                shared = rest.gcd(p);
            }
            Elem::Uni(rest)
        }
        (Elem::UniFrac { num, den }, Elem::UniFrac { num: p, .. }) => {
            let v = poly_valuation(num, p);
            let mut n = num.clone();
            for _ in 0..v {
                n = n.divrem(p).0;
            }
            Elem::UniFrac {
                num: n,
                den: den.clone(),
            }
        }
        _ => {
            let _ = core;
            t.clone()
        }
    }
}
