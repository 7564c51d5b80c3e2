use super::FunctorError;
use crate::complex::{
    homology_table, is_acyclic, koszul_with_carrier, tensor, tower_report, BoundedComplex,
    HomologyEntry, TowerOutcome,
};
use crate::groebner::{module_groebner, module_membership, ModVec, DEFAULT_DEGREE_CAP};
use crate::linalg::Mat;
use crate::ring::{AlgPrime, BPoly, CoreRing, Elem};
use crate::spectrum::SpectrumPoset;
use serde::Serialize;
use std::collections::BTreeMap;

/// Support and cosupport of an object over the declared poset, with
/// per-prime witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub object: String,
    pub support: Vec<String>,
    pub cosupport: Vec<String>,
    pub witnesses: BTreeMap<String, String>,
    /// empty support forces acyclicity
    pub acyclic: bool,
    pub undecided: Vec<String>,
}

/// Support: the primes where the localized homology is nonzero.
pub fn support(m: &BoundedComplex, poset: &SpectrumPoset) -> Result<SupportReport, FunctorError> {
    let mut support = vec![];
    let mut witnesses = BTreeMap::new();
    let mut undecided = vec![];
    for p in &poset.primes {
        match localized_nonzero(p, m)? {
            Some(true) => {
                support.push(p.key());
                witnesses.insert(p.key(), localized_witness(p, m)?);
            }
            Some(false) => {}
            None => undecided.push(p.key()),
        }
    }
    let acyclic = support.is_empty() && undecided.is_empty();
    Ok(SupportReport {
        object: m.to_string(),
        support,
        cosupport: vec![],
        witnesses,
        acyclic,
        undecided,
    })
}

/// Cosupport: the primes where the completed local values are nonzero.
pub fn cosupport(
    m: &BoundedComplex,
    poset: &SpectrumPoset,
    window: usize,
) -> Result<SupportReport, FunctorError> {
    let mut cosupport = vec![];
    let mut witnesses = BTreeMap::new();
    let mut undecided = vec![];
    for p in &poset.primes {
        if p.is_zero_ideal() {
            // generic: the divisibility tower of Hom out of the fraction field
            match super::vfun::v_functor(p, m, window)? {
                super::VOutcome::Value { invariants } => {
                    let nonzero = invariants.iter().any(|(_, i)| !i.is_zero());
                    if nonzero {
                        cosupport.push(p.key());
                        witnesses.insert(p.key(), "stable divisibility tower".into());
                    }
                }
                super::VOutcome::NonMittagLeffler { .. } => {
                    // a non-vanishing derived limit witnesses cosupport
                    cosupport.push(p.key());
                    witnesses.insert(
                        p.key(),
                        "non-Mittag-Leffler divisibility tower (nonzero derived limit)".into(),
                    );
                }
            }
            continue;
        }
        if matches!(m.core, CoreRing::BiPoly { .. }) {
            // finitely generated over the local ring: completion is
            // faithfully flat, so cosupport at a closed point matches support
            if p.height == p.ring.dimension() {
                if localized_nonzero(p, m)? == Some(true) {
                    cosupport.push(p.key());
                    witnesses.insert(p.key(), "faithfully flat completion of local value".into());
                }
            } else {
                undecided.push(p.key());
            }
            continue;
        }
        let local = super::localize(p, m)?;
        let gens: Vec<Elem> = p
            .gens
            .iter()
            .map(|g| super::coerce_to_core(g, &local.core))
            .collect();
        let report = tower_report(&local, &gens, window)?;
        let nonzero = report
            .degrees
            .iter()
            .any(|d| !d.outcome.is_zero() || matches!(d.outcome, TowerOutcome::NonMittagLeffler { .. }));
        if nonzero {
            cosupport.push(p.key());
            let desc: Vec<String> = report
                .degrees
                .iter()
                .filter(|d| !d.outcome.is_zero())
                .map(|d| format!("H_{}: {:?}", d.degree, d.outcome))
                .collect();
            witnesses.insert(p.key(), desc.join("; "));
        }
    }
    Ok(SupportReport {
        object: m.to_string(),
        support: vec![],
        cosupport,
        witnesses,
        acyclic: false,
        undecided,
    })
}

/// Is the homology of m nonzero after localizing at p? Exact over PID
/// cores; over the bivariate ring: exact at closed points and the generic
/// point, bounded saturation at height one.
fn localized_nonzero(p: &AlgPrime, m: &BoundedComplex) -> Result<Option<bool>, FunctorError> {
    if !matches!(m.core, CoreRing::BiPoly { .. }) {
        let local = super::localize(p, m)?;
        return Ok(Some(!is_acyclic(&local)?));
    }
    // bivariate core
    if p.is_zero_ideal() {
        // generic rank via fraction-free elimination
        for k in 0..m.ranks.len() {
            let deg = m.min_deg + k as i64;
            let rank_mid = m.ranks[k];
            let r_out = bivariate_rank(&m.diff_into(deg - 1));
            let r_in = bivariate_rank(&m.diff_into(deg));
            if rank_mid > r_out + r_in {
                return Ok(Some(true));
            }
        }
        return Ok(Some(false));
    }
    if p.height == p.ring.dimension() {
        // closed point: the Koszul object detects the local value exactly
        let kp = koszul_with_carrier(
            m.carrier.clone(),
            &m.core,
            &p.gens.iter().map(|g| super::coerce_to_core(g, &m.core)).collect::<Vec<_>>(),
        )?;
        let t = tensor(&kp, m)?;
        return Ok(Some(!is_acyclic(&t)?));
    }
    // height one: saturation against the generator, degree-capped
    let f = match p.gens.first() {
        Some(Elem::Bi(f)) => f.clone(),
        _ => return Ok(None),
    };
    for k in 0..m.ranks.len() {
        let deg = m.min_deg + k as i64;
        match homology_survives_inverting(m, deg, &f)? {
            Some(true) => return Ok(Some(true)),
            Some(false) => {}
            None => return Ok(None),
        }
    }
    Ok(Some(false))
}

/// Does H_deg(m) survive inverting f? Checks whether every kernel generator
/// is killed by a bounded power of f modulo the image.
fn homology_survives_inverting(
    m: &BoundedComplex,
    deg: i64,
    f: &BPoly,
) -> Result<Option<bool>, FunctorError> {
    let d_in = m.diff_into(deg);
    let d_out = m.diff_into(deg - 1);
    let field = f.field.clone();
    let cols = |mat: &Mat| -> Vec<ModVec> {
        (0..mat.cols)
            .map(|j| {
                ModVec(
                    (0..mat.rows)
                        .map(|i| match mat.at(i, j) {
                            Elem::Bi(p) => p.clone(),
                            _ => BPoly::zero(&field),
                        })
                        .collect(),
                )
            })
            .collect()
    };
    let image_gb = module_groebner(&cols(&d_in), DEFAULT_DEGREE_CAP)
        .map_err(crate::complex::ComplexError::from)?;
    let kernel_gens = if d_out.rows == 0 {
        (0..d_out.cols)
            .map(|i| {
                let mut e = ModVec::zero(&field, d_out.cols);
                e.0[i] = BPoly::constant(crate::ring::Scalar::one(&field));
                e
            })
            .collect::<Vec<_>>()
    } else {
        crate::groebner::syzygies(&cols(&d_out), DEFAULT_DEGREE_CAP)
            .map_err(crate::complex::ComplexError::from)?
    };
    let cap = 8u32;
    'gens: for s in &kernel_gens {
        let mut t = s.clone();
        for _ in 0..=cap {
            if module_membership(&t, &image_gb) {
                continue 'gens;
            }
            t = ModVec(t.0.iter().map(|q| q.mul(f)).collect());
        }
        // f^cap did not push the class into the image: either it genuinely
        // survives or the cap is too small
        let final_check = module_membership(&t, &image_gb);
        if !final_check {
            return Ok(Some(true));
        }
    }
    Ok(Some(false))
}

/// Rank over the fraction field by fraction-free Gaussian elimination.
pub fn bivariate_rank(mat: &Mat) -> usize {
    let field = match &mat.core {
        CoreRing::BiPoly { coeff } => coeff.clone(),
        _ => panic!("bivariate matrix expected"),
    };
    let mut rows: Vec<Vec<BPoly>> = (0..mat.rows)
        .map(|i| {
            (0..mat.cols)
                .map(|j| match mat.at(i, j) {
                    Elem::Bi(p) => p.clone(),
                    _ => BPoly::zero(&field),
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..mat.cols {
        if row >= rows.len() {
            break;
        }
        let Some(pivot) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot);
        let pv = rows[row][col].clone();
        for i in 0..rows.len() {
            if i == row || rows[i][col].is_zero() {
                continue;
            }
            let c = rows[i][col].clone();
            for j in 0..mat.cols {
                let v = rows[i][j].mul(&pv).sub(&rows[row][j].mul(&c));
                rows[i][j] = v;
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

fn localized_witness(p: &AlgPrime, m: &BoundedComplex) -> Result<String, FunctorError> {
    if matches!(m.core, CoreRing::BiPoly { .. }) {
        return Ok("nonvanishing local homology (groebner route)".into());
    }
    let local = super::localize(p, m)?;
    let table = homology_table(&local)?;
    let parts: Vec<String> = table
        .entries
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(d, e)| match e {
            HomologyEntry::Invariants(i) => format!("H_{d} = {i}"),
            HomologyEntry::Fingerprint(_) => format!("H_{d} nonzero"),
        })
        .collect();
    Ok(parts.join("; "))
}
