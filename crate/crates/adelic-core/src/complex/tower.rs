use super::ops::tensor;
use super::{BoundedComplex, ComplexError};
use crate::expr::RingExpr;
use crate::linalg::{
    homology_presentation, image_invariants, induced_map_on_homology, Mat, ModuleInvariants,
};
use crate::ring::{int_valuation, poly_valuation, CoreRing, Elem};
use serde::Serialize;

/// Outcome of the inverse limit of one homology degree of a power tower.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TowerOutcome {
    /// stable images form surjective systems: the limit is a completed free
    /// part plus unchanging torsion
    Stabilized {
        completed_rank: usize,
        stable_torsion: Vec<String>,
    },
    /// images die out: the limit vanishes
    ProZero,
    /// image chain never stabilizes: the limit is not representable here,
    /// and the derived limit is nonzero
    NonMittagLeffler { images_seen: Vec<String> },
}

impl TowerOutcome {
    pub fn is_zero(&self) -> bool {
        match self {
            TowerOutcome::ProZero => true,
            TowerOutcome::Stabilized {
                completed_rank,
                stable_torsion,
            } => *completed_rank == 0 && stable_torsion.is_empty(),
            TowerOutcome::NonMittagLeffler { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerDegree {
    pub degree: i64,
    pub outcome: TowerOutcome,
}

/// Inverse-limit analysis of a Koszul power tower with a stabilization
/// window: the report per homology degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerReport {
    pub window: usize,
    pub degrees: Vec<TowerDegree>,
}

impl TowerReport {
    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.outcome.is_zero())
    }

    pub fn outcome_at(&self, degree: i64) -> Option<&TowerOutcome> {
        self.degrees
            .iter()
            .find(|d| d.degree == degree)
            .map(|d| &d.outcome)
    }
}

/// The tower of tensor products with Koszul complexes on growing powers of
/// the generators, together with its structure maps.
pub struct KoszulTower {
    pub core: CoreRing,
    pub gens: Vec<Elem>,
    pub complex: BoundedComplex,
}

impl KoszulTower {
    /// The k-th stage: complex tensor Koszul(gens^k).
    pub fn stage(&self, k: u32) -> Result<BoundedComplex, ComplexError> {
        let kx = koszul_with_carrier(
            self.complex.carrier.clone(),
            &self.core,
            &powered(&self.core, &self.gens, k),
        )?;
        tensor(&self.complex, &kx)
    }

    /// Structure map components stage(k+1) -> stage(k), degreewise.
    pub fn structure_map(&self, k: u32) -> Result<Vec<(i64, Mat)>, ComplexError> {
        // per-generator two-term map: identity in degree 0, multiplication
        // by the generator in degree 1
        let mut map: Option<(BoundedComplex, Vec<Mat>)> = None; // complex at level k + comps from level k+1
        for g in &self.gens {
            let lower = two_term_power(&self.complex.carrier, &self.core, g, k)?;
            let comp0 = Mat::identity(&self.core, 1);
            let comp1 = Mat::from_rows(&self.core, vec![vec![g.clone()]]);
            map = Some(match map {
                None => (lower, vec![comp0, comp1]),
                Some((acc, comps)) => {
                    let (t, tcomps) =
                        tensor_same_shape_map(&acc, &comps, &lower, &[comp0, comp1])?;
                    (t, tcomps)
                }
            });
        }
        let (kosz_lower, kosz_comps) = match map {
            Some(x) => x,
            None => {
                // no generators: the tower is constant
                let unit = BoundedComplex::unit(self.complex.carrier.clone(), self.core.clone());
                (unit, vec![Mat::identity(&self.core, 1)])
            }
        };
        // tensor with the identity of the complex
        let id_comps: Vec<Mat> = self
            .complex
            .ranks
            .iter()
            .map(|r| Mat::identity(&self.core, *r))
            .collect();
        let (total, comps) = tensor_same_shape_map(
            &self.complex,
            &id_comps,
            &kosz_lower,
            &kosz_comps,
        )?;
        Ok((0..comps.len())
            .map(|i| (total.min_deg + i as i64, comps[i].clone()))
            .collect())
    }
}

fn powered(core: &CoreRing, gens: &[Elem], k: u32) -> Vec<Elem> {
    gens.iter()
        .map(|g| {
            let mut acc = core.one();
            for _ in 0..k {
                acc = acc.mul(g);
            }
            acc
        })
        .collect()
}

/// Koszul complex on a list of elements over a core, with the given carrier.
pub fn koszul_with_carrier(
    carrier: RingExpr,
    core: &CoreRing,
    gens: &[Elem],
) -> Result<BoundedComplex, ComplexError> {
    let mut acc = BoundedComplex::unit(carrier.clone(), core.clone());
    for g in gens {
        let t = BoundedComplex::two_term(
            carrier.clone(),
            Mat::from_rows(core, vec![vec![g.clone()]]),
        );
        acc = tensor(&acc, &t)?;
    }
    Ok(acc)
}

fn two_term_power(
    carrier: &RingExpr,
    core: &CoreRing,
    g: &Elem,
    k: u32,
) -> Result<BoundedComplex, ComplexError> {
    let gk = powered(core, std::slice::from_ref(g), k).pop().unwrap();
    Ok(BoundedComplex::two_term(
        carrier.clone(),
        Mat::from_rows(core, vec![vec![gk]]),
    ))
}

/// Tensor two chain maps between identically shaped complexes; returns the
/// lower total complex and the total components (upper shapes match).
fn tensor_same_shape_map(
    a: &BoundedComplex,
    a_comps: &[Mat],
    b: &BoundedComplex,
    b_comps: &[Mat],
) -> Result<(BoundedComplex, Vec<Mat>), ComplexError> {
    let t = tensor(a, b)?;
    let core = t.core.clone();
    let mut comps = vec![];
    for n in t.min_deg..=t.max_deg() {
        let blocks: Vec<(i64, i64)> = (a.min_deg..=a.max_deg())
            .map(|p| (p, n - p))
            .filter(|(p, q)| a.rank_at(*p) > 0 && b.rank_at(*q) > 0)
            .collect();
        let size: usize = blocks
            .iter()
            .map(|(p, q)| a.rank_at(*p) * b.rank_at(*q))
            .sum();
        let mut m = Mat::zero(&core, size, size);
        let mut off = 0;
        for (p, q) in &blocks {
            let fa = &a_comps[(p - a.min_deg) as usize];
            let fb = &b_comps[(q - b.min_deg) as usize];
            let block = fa.kronecker(fb);
            for i in 0..block.rows {
                for j in 0..block.cols {
                    m.set(off + i, off + j, block.at(i, j).clone());
                }
            }
            off += block.rows;
        }
        comps.push(m);
    }
    Ok((t, comps))
}

/// Run the inverse-limit analysis of the Koszul power tower of `complex`
/// on `gens` over its core, with the given stabilization window.
pub fn tower_report(
    complex: &BoundedComplex,
    gens: &[Elem],
    window: usize,
) -> Result<TowerReport, ComplexError> {
    let core = complex.core.clone();
    if !core.supports_snf() {
        return Err(ComplexError::NotRepresentable);
    }
    let tower = KoszulTower {
        core: core.clone(),
        gens: gens.to_vec(),
        complex: complex.clone(),
    };
    let base_lo = 2u32;
    let slack = 6u32;
    let bases: Vec<u32> = (base_lo..base_lo + window as u32 + slack).collect();
    let max_extra = (2 * window + 4) as u32;

    // precompute stages once
    let k_max = base_lo + window as u32 + slack + max_extra;
    let mut stages = vec![];
    for k in 1..=k_max {
        stages.push(tower.stage(k)?);
    }
    let deg_lo = stages[0].min_deg;
    let deg_hi = stages[0].max_deg();

    let mut degrees = vec![];
    for deg in deg_lo..=deg_hi {
        let mut per_base: Vec<Option<ModuleInvariants>> = vec![];
        let mut non_ml_note: Option<Vec<String>> = None;
        for &b in &bases {
            match stable_image_at(&tower, &stages, b, deg, max_extra)? {
                StableImage::Stable(inv) => per_base.push(Some(inv)),
                StableImage::NotStable(seen) => {
                    non_ml_note = Some(seen);
                    break;
                }
            }
        }
        // scan for a run of `window` consecutive bases whose stable images
        // fit the limit pattern, preferring the latest run
        let outcome = if let Some(seen) = non_ml_note {
            TowerOutcome::NonMittagLeffler { images_seen: seen }
        } else {
            let mut best: Option<TowerOutcome> = None;
            if per_base.len() >= window {
                for start in (0..=per_base.len() - window).rev() {
                    let slice = &per_base[start..start + window];
                    let candidate = classify(&core, gens, slice);
                    if !matches!(candidate, TowerOutcome::NonMittagLeffler { .. }) {
                        best = Some(candidate);
                        break;
                    }
                }
            }
            best.unwrap_or_else(|| TowerOutcome::NonMittagLeffler {
                images_seen: per_base
                    .iter()
                    .flatten()
                    .map(|i| i.to_string())
                    .collect(),
            })
        };
        degrees.push(TowerDegree {
            degree: deg,
            outcome,
        });
    }
    Ok(TowerReport { window, degrees })
}

enum StableImage {
    Stable(ModuleInvariants),
    NotStable(Vec<String>),
}

/// Invariants of the stable image im(H(stage K) -> H(stage b)) for K >> b.
fn stable_image_at(
    tower: &KoszulTower,
    stages: &[BoundedComplex],
    b: u32,
    deg: i64,
    max_extra: u32,
) -> Result<StableImage, ComplexError> {
    let stage_b = &stages[(b - 1) as usize];
    let (_, pres_b) = homology_presentation_at(stage_b, deg)?;
    // composite maps H(stage b+j) -> H(stage b)
    let mut composite: Option<Mat> = None;
    let mut last_inv: Option<ModuleInvariants> = None;
    let mut seen = vec![];
    let mut stable_count = 0;
    for j in 1..=max_extra {
        let upper = &stages[(b + j - 1) as usize];
        let (_, pres_upper) = homology_presentation_at(upper, deg)?;
        let step = tower.structure_map(b + j - 1)?;
        let lower = &stages[(b + j - 2) as usize];
        let (_, pres_lower) = homology_presentation_at(lower, deg)?;
        let f = chain_map_component(&step, deg, lower, upper);
        let induced = induced_map_on_homology(&f, &pres_upper, &pres_lower);
        composite = Some(match composite {
            None => induced,
            Some(c) => c.mul(&induced),
        });
        let img = image_invariants(composite.as_ref().unwrap(), &pres_b.relations)?;
        seen.push(img.to_string());
        if last_inv.as_ref() == Some(&img) {
            stable_count += 1;
            if stable_count >= 2 {
                return Ok(StableImage::Stable(img));
            }
        } else {
            stable_count = 0;
        }
        last_inv = Some(img);
    }
    Ok(StableImage::NotStable(seen))
}

fn homology_presentation_at(
    c: &BoundedComplex,
    deg: i64,
) -> Result<(ModuleInvariants, crate::linalg::HomologyPresentation), ComplexError> {
    let d_in = c.diff_into(deg);
    let d_out = c.diff_into(deg - 1);
    Ok(homology_presentation(&d_in, &d_out)?)
}

fn chain_map_component(
    comps: &[(i64, Mat)],
    deg: i64,
    lower: &BoundedComplex,
    upper: &BoundedComplex,
) -> Mat {
    comps
        .iter()
        .find(|(d, _)| *d == deg)
        .map(|(_, m)| m.clone())
        .unwrap_or_else(|| {
            Mat::zero(&lower.core, lower.rank_at(deg), upper.rank_at(deg))
        })
}

/// Classify the window of stable-image invariants: constant torsion stays,
/// exponents growing by one per level assemble to completed free rank.
fn classify(
    core: &CoreRing,
    gens: &[Elem],
    per_base: &[Option<ModuleInvariants>],
) -> TowerOutcome {
    let invs: Vec<&ModuleInvariants> = per_base.iter().flatten().collect();
    if invs.is_empty() {
        return TowerOutcome::ProZero;
    }
    if invs.iter().all(|i| i.is_zero()) {
        return TowerOutcome::ProZero;
    }
    if invs.iter().any(|i| i.free_rank > 0) {
        return TowerOutcome::NonMittagLeffler {
            images_seen: invs.iter().map(|i| i.to_string()).collect(),
        };
    }
    let n = invs[0].torsion.len();
    if invs.iter().any(|i| i.torsion.len() != n) {
        return TowerOutcome::NonMittagLeffler {
            images_seen: invs.iter().map(|i| i.to_string()).collect(),
        };
    }
    let mut completed_rank = 0;
    let mut stable = vec![];
    'factor: for idx in 0..n {
        let exps: Vec<Option<u64>> = invs
            .iter()
            .map(|i| valuation_exponent(core, gens, &i.torsion[idx]))
            .collect();
        if exps.windows(2).all(|w| w[0] == w[1]) {
            stable.push(invs[0].torsion[idx].to_string());
            continue 'factor;
        }
        let growing = exps.windows(2).all(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => b == a + 1,
            _ => false,
        });
        if growing {
            completed_rank += 1;
            continue 'factor;
        }
        return TowerOutcome::NonMittagLeffler {
            images_seen: invs.iter().map(|i| i.to_string()).collect(),
        };
    }
    TowerOutcome::Stabilized {
        completed_rank,
        stable_torsion: stable,
    }
}

/// Valuation of a torsion factor at the tower generator, for single
/// generator towers over a local core.
fn valuation_exponent(core: &CoreRing, gens: &[Elem], t: &Elem) -> Option<u64> {
    if gens.len() != 1 {
        return None;
    }
    match (core, t, &gens[0]) {
        (CoreRing::Integers, Elem::Int(n), Elem::Int(p)) => Some(int_valuation(n, p)),
        (CoreRing::IntegersLocalized { .. }, Elem::Rat(q), Elem::Rat(p)) => {
            Some(int_valuation(q.numer(), p.numer()))
        }
        (CoreRing::IntegersLocalized { .. }, Elem::Rat(q), Elem::Int(p)) => {
            Some(int_valuation(q.numer(), p))
        }
        (CoreRing::UniPoly { .. }, Elem::Uni(f), Elem::Uni(g)) => Some(poly_valuation(f, g)),
        (
            CoreRing::UniPolyLocalized { .. },
            Elem::UniFrac { num, .. },
            Elem::UniFrac { num: g, .. },
        ) => Some(poly_valuation(num, g)),
        (CoreRing::UniPolyLocalized { .. }, Elem::UniFrac { num, .. }, Elem::Uni(g)) => {
            Some(poly_valuation(num, g))
        }
        _ => None,
    }
}
