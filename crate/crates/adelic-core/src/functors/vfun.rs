use super::FunctorError;
use crate::complex::{homology_table, BoundedComplex, HomologyEntry};
use crate::linalg::{
    homology_presentation, image_invariants, in_image, induced_map_on_homology, Mat,
    ModuleInvariants,
};
use crate::ring::{AlgPrime, CoreRing};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// Value of Hom out of the localized unit: a stabilized module, or a
/// non-Mittag-Leffler fingerprint with no closed form asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum VOutcome {
    Value {
        invariants: Vec<(i64, ModuleInvariants)>,
    },
    NonMittagLeffler {
        degree: i64,
        images_seen: Vec<String>,
    },
}

/// Hom out of the localization of the unit at p, via the divisibility
/// tower over the multiplicative complement of p.
///
/// Shortcuts: over a field or when p already acts invertibly the functor is
/// the identity; on p-primary torsion the multipliers act invertibly and
/// the value is the object itself.
pub fn v_functor(
    p: &AlgPrime,
    m: &BoundedComplex,
    window: usize,
) -> Result<VOutcome, FunctorError> {
    let table = homology_table(m)?;
    let invariants: Vec<(i64, ModuleInvariants)> = table
        .entries
        .iter()
        .filter_map(|(d, e)| match e {
            HomologyEntry::Invariants(i) if !i.is_zero() => Some((*d, i.clone())),
            _ => None,
        })
        .collect();
    if m.core.is_field() {
        return Ok(VOutcome::Value { invariants });
    }
    // identity on p-primary torsion: every multiplier outside p is a unit
    // on such homology
    if !p.is_zero_ideal() {
        let all_p_primary = invariants.iter().all(|(_, i)| {
            i.free_rank == 0 && i.torsion.iter().all(|t| primary_to(p, t, &m.core))
        });
        if all_p_primary {
            return Ok(VOutcome::Value { invariants });
        }
    }
    // divisibility tower over successive integer multipliers outside p
    let multipliers = integer_multipliers(p, &m.core, 2 + 2 * window);
    if multipliers.is_empty() {
        return Err(FunctorError::NotFinitelyGenerated);
    }
    let mut out = vec![];
    for k in 0..m.ranks.len() {
        let deg = m.min_deg + k as i64;
        let d_in = m.diff_into(deg);
        let d_out = m.diff_into(deg - 1);
        let (_, pres) = homology_presentation(&d_in, &d_out)
            .map_err(crate::complex::ComplexError::from)?;
        if pres.generators() == 0 {
            continue;
        }
        let mut composite = Mat::identity(&m.core, pres.generators());
        let mut images = vec![];
        let mut stable: Option<ModuleInvariants> = None;
        let mut repeats = 0;
        for u in &multipliers {
            let mult = Mat::scalar_diag(&m.core, m.ranks[k], u);
            let induced = induced_map_on_homology(&mult, &pres, &pres);
            composite = composite.mul(&induced);
            let img = image_invariants(&composite, &pres.relations)
                .map_err(crate::complex::ComplexError::from)?;
            images.push(img.to_string());
            // submodule stabilization: previous image contained in the
            // image shrunk by the next multiplier
            let stabilized = submodule_equal(&composite, &pres.relations, u)
                .map_err(crate::complex::ComplexError::from)?;
            if stabilized {
                repeats += 1;
                if repeats >= window {
                    stable = Some(img);
                    break;
                }
            } else {
                repeats = 0;
            }
        }
        match stable {
            Some(inv) => {
                if !inv.is_zero() {
                    out.push((deg, inv));
                }
            }
            None => {
                return Ok(VOutcome::NonMittagLeffler {
                    degree: deg,
                    images_seen: images,
                })
            }
        }
    }
    Ok(VOutcome::Value { invariants: out })
}

/// Does shrinking the image by one more multiplier keep the same
/// submodule? True when each current generator stays inside.
fn submodule_equal(
    image_gens: &Mat,
    relations: &Mat,
    next_mult: &crate::ring::Elem,
) -> Result<bool, crate::linalg::LinalgError> {
    let shrunk = image_gens.scale(next_mult);
    let target = shrunk.hstack(relations);
    for j in 0..image_gens.cols {
        let col = image_gens.column(j);
        if !in_image(&target, &col)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn primary_to(p: &AlgPrime, t: &crate::ring::Elem, core: &CoreRing) -> bool {
    // t is a p-power up to units: stripping the p-part leaves a unit
    use crate::ring::{int_valuation, poly_valuation, Elem};
    match (p.gens.first(), t) {
        (Some(Elem::Int(g)), Elem::Int(n)) => {
            let v = int_valuation(n, g);
            let mut rest = n.clone();
            for _ in 0..v {
                rest /= g;
            }
            core.is_unit(&Elem::Int(rest))
        }
        (Some(Elem::Int(g)), Elem::Rat(q)) => {
            let v = int_valuation(q.numer(), g);
            let mut rest = q.numer().clone();
            for _ in 0..v {
                rest /= g;
            }
            core.is_unit(&Elem::Rat(num_rational::BigRational::from(rest)))
        }
        (Some(Elem::Uni(g)), Elem::Uni(f)) => {
            let v = poly_valuation(f, g);
            let mut rest = f.clone();
            for _ in 0..v {
                rest = rest.divrem(g).0;
            }
            rest.is_constant()
        }
        (Some(Elem::Uni(g)), Elem::UniFrac { num, .. }) => {
            let v = poly_valuation(num, g);
            let mut rest = num.clone();
            for _ in 0..v {
                rest = rest.divrem(g).0;
            }
            rest.is_constant()
        }
        _ => false,
    }
}

/// Successive integer multipliers avoiding the prime, usable over the
/// integer-like cores; empty when the core has no canonical cofinal system.
fn integer_multipliers(p: &AlgPrime, core: &CoreRing, count: usize) -> Vec<crate::ring::Elem> {
    match core {
        CoreRing::Integers | CoreRing::IntegersLocalized { .. } | CoreRing::Rationals => {
            let avoid: Option<BigInt> = p.int_gen();
            let mut out = vec![];
            let mut n = BigInt::from(2);
            while out.len() < count {
                let skip = matches!(&avoid, Some(g) if (&n % g).is_zero());
                if !skip {
                    out.push(core.from_bigint(&n));
                }
                n += 1;
            }
            out
        }
        _ => vec![],
    }
}
