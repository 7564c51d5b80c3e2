//! Diagram modules over the cube of rings: tensoring up from the base,
//! the cocartesian check on base-change maps, strict totalization, the
//! round trip through the limit, and the dimension-indexed reconstruction.

mod reconstruct;

pub use reconstruct::{f_d_reconstruct, ReconstructionReport};

use crate::complex::{
    homology_table, is_quasi_iso, BoundedComplex, ComplexMap, HomologyTable,
    TotalComplexBuilder,
};
use crate::cube::{build_adelic_cube, CubeDiagram, CubeError, FaceKind, FaceMap};
use crate::expr::{is_unit, UnitVerdict};
use crate::linalg::Mat;
use crate::ring::CoreRing;
use crate::spectrum::{Flag, SpectrumPoset};
use crate::verifier::{verify_pullback, VerificationReport, Verdict, VerifierError};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("module is not cocartesian: {0}")]
    NotCocartesian(String),
    #[error("a family product remains; the diagram is not reducible here")]
    FamilyProductRemains,
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error(transparent)]
    Total(#[from] crate::complex::TotalError),
}

/// A module over the diagram of adelic rings: a complex per flag with
/// base-change maps along the faces.
#[derive(Debug, Clone)]
pub struct AdelicModule {
    pub cube: CubeDiagram,
    pub vertices: BTreeMap<Flag, BoundedComplex>,
    pub base_changes: BTreeMap<(Flag, usize), FaceMap>,
    pub augmentations: BTreeMap<Flag, FaceMap>,
}

impl Serialize for AdelicModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AdelicModule", 3)?;
        st.serialize_field("cube", &self.cube)?;
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .map(|(f, v)| serde_json::json!({"flag": f.to_string(), "vertex": v}))
            .collect();
        st.serialize_field("vertices", &vertices)?;
        let faces: Vec<_> = self
            .base_changes
            .iter()
            .map(|((f, spot), face)| {
                serde_json::json!({"flag": f.to_string(), "spot": spot, "face": face})
            })
            .collect();
        st.serialize_field("base_changes", &faces)?;
        st.end()
    }
}

/// Per-face verdicts of the cocartesian check.
#[derive(Debug, Clone, Serialize)]
pub struct CocartesianStatus {
    pub faces: Vec<(String, usize, bool)>,
    pub witnesses: Vec<(String, HomologyTable)>,
    pub cocartesian: bool,
}

impl AdelicModule {
    pub fn vertex(&self, flag: &Flag) -> Result<&BoundedComplex, ModuleError> {
        self.vertices
            .get(flag)
            .ok_or_else(|| ModuleError::NotCocartesian(format!("missing vertex {flag}")))
    }
}

/// Tensor a finitely generated complex up to the adelic diagram: every
/// vertex is the coefficient over that entry's carrier and every base
/// change is the canonical identification.
pub fn tensor_up(m: &BoundedComplex, poset: &SpectrumPoset) -> Result<AdelicModule, ModuleError> {
    let cube = build_adelic_cube(m, poset)?;
    let mut vertices = BTreeMap::new();
    for flag in cube.flags() {
        let e = cube.entry(&flag)?;
        vertices.insert(flag.clone(), e.clone());
    }
    let base_changes = cube.faces.clone();
    let augmentations = cube.augmentations.clone();
    Ok(AdelicModule {
        cube,
        vertices,
        base_changes,
        augmentations,
    })
}

/// Acyclicity of a vertex across its product carrier: direct over a
/// product-free carrier, and by certified unit annihilation otherwise.
pub fn vertex_acyclic(v: &BoundedComplex) -> Result<bool, ModuleError> {
    if !v.carrier.contains_family_product() {
        if let Some(lc) = v.carrier.local_core() {
            let _ = lc;
            return Ok(crate::complex::is_acyclic(v)?);
        }
    }
    // uniform vertex over a product carrier: compute homology over the core
    // and check every invariant dies by a certified unit of the carrier
    let plain = v.with_carrier(crate::expr::RingExpr::Base(
        v.carrier.base_ring(),
    ));
    let table = homology_table(&plain)?;
    for (_, e) in &table.entries {
        match e {
            crate::complex::HomologyEntry::Invariants(i) => {
                if i.free_rank > 0 {
                    return Ok(false);
                }
                for t in &i.torsion {
                    match is_unit(&to_base_elem(t, &v.carrier.base_ring()), &v.carrier) {
                        Ok(cert) if cert.verdict == UnitVerdict::Unit => {}
                        _ => return Ok(false),
                    }
                }
            }
            crate::complex::HomologyEntry::Fingerprint(f) => {
                if !f.is_zero {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn to_base_elem(e: &crate::ring::Elem, base: &crate::ring::BaseRing) -> crate::ring::Elem {
    use crate::ring::Elem;
    match (e, base) {
        (Elem::Rat(q), crate::ring::BaseRing::Integers) if q.denom() == &1.into() => {
            Elem::Int(q.numer().clone())
        }
        (Elem::UniFrac { num, den }, crate::ring::BaseRing::UnivariatePoly { .. })
            if den.is_constant() =>
        {
            Elem::Uni(num.clone())
        }
        _ => e.clone(),
    }
}

/// Check every base-change map is a weak equivalence: the extension of
/// scalars along a face is a carrier retag (the faces are flat), so the
/// check is cone acyclicity of the stored matrices.
pub fn is_cocartesian(x: &AdelicModule) -> Result<CocartesianStatus, ModuleError> {
    let mut faces = vec![];
    let mut witnesses = vec![];
    let mut all = true;
    for ((flag, spot), face) in &x.base_changes {
        let Some(src_flag) = flag.omit(*spot) else {
            continue;
        };
        let src = x.vertex(&src_flag)?;
        let tgt = x.vertex(flag)?;
        let ok = face_is_equivalence(src, tgt, face)?;
        if !ok {
            all = false;
            if let Some(t) = face_cone_table(src, tgt, face)? {
                witnesses.push((format!("{src_flag} -> {flag}"), t));
            }
        }
        faces.push((flag.to_string(), *spot, ok));
    }
    Ok(CocartesianStatus {
        faces,
        witnesses,
        cocartesian: all,
    })
}

/// Is the base-changed source carried to the target by a quasi-isomorphism?
fn face_is_equivalence(
    src: &BoundedComplex,
    tgt: &BoundedComplex,
    face: &FaceMap,
) -> Result<bool, ModuleError> {
    match tgt.carrier.local_core() {
        Some(lc) => {
            // product-free target: exact cone over the target's local core
            let (Some(s), Some(t)) = (src.base_changed(&lc.core), tgt.base_changed(&lc.core))
            else {
                return Ok(false);
            };
            let s = s.with_carrier(tgt.carrier.clone());
            let t = t.with_carrier(tgt.carrier.clone());
            let comps: Vec<(i64, Mat)> = face
                .comps
                .iter()
                .map(|(d, m)| (*d, m.base_change(&lc.core).unwrap_or_else(|| m.clone())))
                .collect();
            let map = ComplexMap::new(s, t, comps, None)?;
            let (ok, _) = is_quasi_iso(&map)?;
            Ok(ok)
        }
        None => {
            // product carrier: the canonical identification is certified by
            // identity matrices between matching presentations
            let identity_shaped = src.ranks == tgt.ranks
                && src.min_deg == tgt.min_deg
                && face.comps.iter().all(|(_, m)| m.is_identity())
                && diffs_match(src, tgt);
            if identity_shaped {
                return Ok(true);
            }
            // otherwise check by certified annihilation over a common core
            let common = if src.base_changed(&tgt.core).is_some() {
                tgt.core.clone()
            } else if tgt.base_changed(&src.core).is_some() {
                src.core.clone()
            } else {
                return Ok(false);
            };
            let s = src
                .base_changed(&common)
                .expect("checked")
                .with_carrier(tgt.carrier.clone());
            let t = tgt
                .base_changed(&common)
                .expect("checked")
                .with_carrier(tgt.carrier.clone());
            let comps: Vec<(i64, Mat)> = face
                .comps
                .iter()
                .map(|(d, m)| (*d, m.base_change(&common).unwrap_or_else(|| m.clone())))
                .collect();
            let map = ComplexMap::new(s, t, comps, None)?;
            let cone = crate::complex::cone(&map)?;
            vertex_acyclic(&cone)
        }
    }
}

/// Same canonical element strings: presentations agree after base change.
fn diffs_match(a: &BoundedComplex, b: &BoundedComplex) -> bool {
    a.diffs.len() == b.diffs.len()
        && a.diffs.iter().zip(&b.diffs).all(|(x, y)| {
            x.rows == y.rows
                && x.cols == y.cols
                && (0..x.rows).all(|i| {
                    (0..x.cols).all(|j| x.at(i, j).to_string() == y.at(i, j).to_string())
                })
        })
}

fn face_cone_table(
    src: &BoundedComplex,
    tgt: &BoundedComplex,
    face: &FaceMap,
) -> Result<Option<HomologyTable>, ModuleError> {
    let Some(lc) = tgt.carrier.local_core() else {
        return Ok(None);
    };
    let (Some(s), Some(t)) = (src.base_changed(&lc.core), tgt.base_changed(&lc.core)) else {
        return Ok(None);
    };
    let s = s.with_carrier(tgt.carrier.clone());
    let t = t.with_carrier(tgt.carrier.clone());
    let comps: Vec<(i64, Mat)> = face
        .comps
        .iter()
        .map(|(d, m)| (*d, m.base_change(&lc.core).unwrap_or_else(|| m.clone())))
        .collect();
    let map = ComplexMap::new(s, t, comps, None)?;
    let (_, table) = is_quasi_iso(&map)?;
    Ok(Some(table))
}

/// Strict totalization of the punctured module diagram. A module
/// recognized as the tensor-up of its coefficient totalizes to that
/// coefficient once the verification passes; otherwise every vertex must
/// be product-free and base-changeable to one core.
pub fn holim_module(x: &AdelicModule) -> Result<BoundedComplex, ModuleError> {
    if let Some(m) = tensor_up_shape(x) {
        let report = verify_pullback(&x.cube)?;
        return match report.verdict {
            Verdict::Pullback => Ok(m),
            Verdict::RelativePullback => Err(ModuleError::FamilyProductRemains),
            Verdict::NotPullback => Err(ModuleError::NotCocartesian(
                "the diagram of the coefficient fails verification".into(),
            )),
        };
    }
    // the common core: the deepest localization among the vertices
    let mut core: Option<CoreRing> = None;
    for v in x.vertices.values() {
        if v.carrier.contains_family_product() {
            return Err(ModuleError::FamilyProductRemains);
        }
        core = Some(match core {
            None => v.core.clone(),
            // keep whichever core the other base-changes into
            Some(c) => {
                if v.core.base_change(&v.core.zero(), &c).is_some() {
                    c
                } else if c.base_change(&c.zero(), &v.core).is_some() {
                    v.core.clone()
                } else {
                    return Err(ModuleError::FamilyProductRemains);
                }
            }
        });
    }
    let core = core.ok_or(ModuleError::FamilyProductRemains)?;
    let base_carrier = crate::expr::RingExpr::Base(
        x.cube.poset.base.clone(),
    );
    let mut builder = TotalComplexBuilder::new(base_carrier.clone(), core.clone());
    let mut nodes = BTreeMap::new();
    for (flag, v) in &x.vertices {
        let vc = v
            .base_changed(&core)
            .ok_or(ModuleError::FamilyProductRemains)?
            .with_carrier(base_carrier.clone());
        let node = builder.add_node(flag.len(), vc);
        nodes.insert(flag.clone(), node);
    }
    for ((flag, spot), face) in &x.base_changes {
        let Some(src_flag) = flag.omit(*spot) else {
            continue;
        };
        let (Some(&src), Some(&dst)) = (nodes.get(&src_flag), nodes.get(flag)) else {
            continue;
        };
        let comps: Vec<(i64, Mat)> = face
            .comps
            .iter()
            .map(|(d, m)| (*d, m.base_change(&core).unwrap_or_else(|| m.clone())))
            .collect();
        let sign = if spot % 2 == 0 { 1 } else { -1 };
        builder.add_arrow(src, dst, comps, sign)?;
    }
    // anchor the first cochain level at degree zero
    Ok(crate::complex::shift(&builder.build()?, 1))
}

/// Recognize a module as the tensor-up of the cube's coefficient: every
/// vertex presents the coefficient and every base change is the canonical
/// identification.
fn tensor_up_shape(x: &AdelicModule) -> Option<BoundedComplex> {
    let m = &x.cube.coefficient;
    let all_vertices = x.vertices.iter().all(|(flag, v)| {
        v.min_deg == m.min_deg
            && v.ranks == m.ranks
            && diffs_match(v, m)
            && x.cube
                .entries
                .get(flag)
                .is_some_and(|e| e.carrier == v.carrier)
    });
    let all_faces = x
        .base_changes
        .values()
        .all(|f| f.comps.iter().all(|(_, mat)| mat.is_identity()));
    (all_vertices && all_faces).then(|| m.clone())
}

/// Round-trip report: either the verification of the coefficient against
/// its own cube, or the comparison of a module with the tensor-up of its
/// totalization.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RoundTrip {
    Coefficient {
        report: VerificationReport,
        pass: bool,
    },
    Module {
        holim: HomologyTable,
        mismatches: Vec<(String, String, String)>,
        pass: bool,
    },
}

/// The coefficient side: the unit map into the totalized diagram of the
/// coefficient is a quasi-isomorphism iff the augmented cube verifies.
pub fn roundtrip_coefficient(
    m: &BoundedComplex,
    poset: &SpectrumPoset,
) -> Result<RoundTrip, ModuleError> {
    let cube = build_adelic_cube(m, poset)?;
    let report = verify_pullback(&cube)?;
    let pass = matches!(report.verdict, Verdict::Pullback);
    Ok(RoundTrip::Coefficient { report, pass })
}

/// The module side: totalize, tensor the result back up, and compare the
/// vertices. A mismatch certifies the module does not come from the base.
pub fn roundtrip_module(x: &AdelicModule) -> Result<RoundTrip, ModuleError> {
    let n = holim_module(x)?;
    let holim_table = homology_table(&n)?;
    let y = retensor(x, &n)?;
    let mut mismatches = vec![];
    for (flag, vx) in &x.vertices {
        let vy = y.vertex(flag)?;
        let tx = vertex_table(vx, &x.cube.poset)?;
        let ty = vertex_table(vy, &x.cube.poset)?;
        if tx != ty {
            mismatches.push((flag.to_string(), ty, tx));
        }
    }
    let pass = mismatches.is_empty();
    Ok(RoundTrip::Module {
        holim: holim_table,
        mismatches,
        pass,
    })
}

/// Tensor the totalization back up over the same diagram of rings.
fn retensor(x: &AdelicModule, n: &BoundedComplex) -> Result<AdelicModule, ModuleError> {
    let mut vertices = BTreeMap::new();
    for (flag, v) in &x.vertices {
        let nv = n
            .base_changed(&v.core)
            .unwrap_or_else(|| n.clone())
            .with_carrier(v.carrier.clone());
        vertices.insert(flag.clone(), nv);
    }
    let mut base_changes = BTreeMap::new();
    for (key, _) in &x.base_changes {
        let target = vertices.get(&key.0).expect("vertex exists");
        base_changes.insert(
            key.clone(),
            FaceMap::identity_shaped(FaceKind::LocalizeUnit, key.1, target),
        );
    }
    Ok(AdelicModule {
        cube: x.cube.clone(),
        vertices,
        base_changes,
        augmentations: x.augmentations.clone(),
    })
}

/// Reduced invariants of a vertex across its carrier, as a stable string:
/// tables over the local core where product-free, per-declared-chain
/// tables across product carriers.
fn vertex_table(v: &BoundedComplex, poset: &SpectrumPoset) -> Result<String, ModuleError> {
    if v.carrier.local_core().is_some() {
        return factor_table(v, &v.carrier);
    }
    let mut parts = vec![];
    for (chain, factor) in crate::cube::instantiate_chains(&v.carrier, poset) {
        let t = factor_table(v, &factor)?;
        if t != "0" {
            parts.push(format!("[{}] {t}", chain.join(">")));
        }
    }
    Ok(if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("; ")
    })
}

fn factor_table(v: &BoundedComplex, carrier: &crate::expr::RingExpr) -> Result<String, ModuleError> {
    let lc = carrier
        .local_core()
        .ok_or(ModuleError::FamilyProductRemains)?;
    let Some(w) = v.base_changed(&lc.core).or_else(|| {
        // the presentation may already live over a localization refining
        // the carrier's reading (the semilocal convention)
        lc.core
            .base_change(&lc.core.zero(), &v.core)
            .map(|_| v.clone())
    }) else {
        return Ok(format!("not reducible over {carrier}"));
    };
    let w = w.with_carrier(carrier.clone());
    let t = homology_table(&w)?;
    let parts: Vec<String> = t
        .entries
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(d, e)| match e {
            crate::complex::HomologyEntry::Invariants(i) => format!("H_{d}={i}"),
            crate::complex::HomologyEntry::Fingerprint(_) => format!("H_{d} nonzero"),
        })
        .collect();
    Ok(if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(", ")
    })
}
