//! Scenario files: the JSON surface describing a base ring, a declared
//! prime poset, a coefficient complex and optional diagram controls.

use adelic_core::complex::BoundedComplex;
use adelic_core::cube::{CubeDiagram, CubeVariant, FaceKind, FaceMap};
use adelic_core::expr::RingExpr;
use adelic_core::modules::AdelicModule;
use adelic_core::ring::{parse_elem, AlgPrime, BaseRing, CoreRing, Elem};
use adelic_core::spectrum::{Ambient, Flag, SpectrumPoset};
use adelic_core::Mat;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("bad element '{0}': {1}")]
    Element(String, String),
    #[error("bad prime: {0}")]
    Prime(String),
    #[error("bad poset: {0}")]
    Poset(String),
    #[error("bad module: {0}")]
    Module(String),
    #[error("unknown flag '{0}'")]
    UnknownFlag(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub base: BaseRing,
    #[serde(default = "default_ambient")]
    pub ambient: Ambient,
    pub primes: Vec<PrimeSpec>,
    #[serde(default = "default_variant")]
    pub variant: VariantSpec,
    #[serde(default)]
    pub module: Option<ModuleSpec>,
    /// negative control: flip the sign of one face matrix
    #[serde(default)]
    pub corrupt_face: Option<CorruptFace>,
    /// negative control: replace a completed factor by its residue field
    #[serde(default)]
    pub replace_entry_with_residue: Option<String>,
    /// the cospan counterexample: a torsion module sitting at one corner
    /// of a diagram of two copies of the base over the rationals
    #[serde(default)]
    pub torsion_cospan: Option<String>,
}

fn default_ambient() -> Ambient {
    Ambient::Full
}

fn default_variant() -> VariantSpec {
    VariantSpec::Adelic
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSpec {
    Adelic,
    BeilinsonParshin,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSpec {
    pub generators: Vec<String>,
    pub height: u32,
    pub dim: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default)]
    pub min_degree: i64,
    pub ranks: Vec<usize>,
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorruptFace {
    pub flag: Vec<u32>,
    pub spot: usize,
}

/// A validated scenario: the poset, the coefficient, and the requested
/// diagram controls.
pub struct Scenario {
    pub poset: SpectrumPoset,
    pub coefficient: BoundedComplex,
    pub variant: VariantSpec,
    pub corrupt_face: Option<(Flag, usize)>,
    pub replace_entry_with_residue: Option<Elem>,
    pub torsion_cospan: Option<Elem>,
}

pub fn load(path: &str, poset_primes: Option<&str>) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    let file: ScenarioFile = serde_json::from_str(&text)?;
    if file.schema != 1 {
        return Err(ScenarioError::Schema(file.schema));
    }
    let base = file.base.clone();
    let base_core = base.core();
    let mut primes = vec![];
    let mut dims = vec![];
    for p in &file.primes {
        let gens: Vec<Elem> = p
            .generators
            .iter()
            .map(|s| {
                parse_elem(s, &base_core)
                    .map_err(|e| ScenarioError::Element(s.clone(), e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let prime = AlgPrime::new(base.clone(), gens, p.height)
            .map_err(|e| ScenarioError::Prime(e.to_string()))?;
        primes.push(prime);
        dims.push(p.dim);
    }
    // optional restriction to a declared subset, e.g. "(2),(3)"
    if let Some(keep) = poset_primes {
        let keys: Vec<String> = keep.split(',').map(|s| s.trim().to_string()).collect();
        let filtered: Vec<(AlgPrime, u32)> = primes
            .iter()
            .cloned()
            .zip(dims.iter().copied())
            .filter(|(p, _)| p.is_zero_ideal() || keys.contains(&p.key()))
            .collect();
        primes = filtered.iter().map(|(p, _)| p.clone()).collect();
        dims = filtered.iter().map(|(_, d)| *d).collect();
    }
    let poset = SpectrumPoset::new(base.clone(), primes, dims, file.ambient)
        .map_err(|e| ScenarioError::Poset(e.to_string()))?;

    // the coefficient core: over a semilocal ambient the base is read as
    // localized at the declared closed points
    let coeff_core = coefficient_core(&poset);
    let carrier = RingExpr::base(base.clone());
    let coefficient = match &file.module {
        None => BoundedComplex::unit(carrier, coeff_core.clone()),
        Some(spec) => {
            let mut diffs = vec![];
            for (k, rows) in spec.differentials.iter().enumerate() {
                let rows_e: Vec<Vec<Elem>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| {
                                parse_elem(s, &coeff_core).map_err(|e| {
                                    ScenarioError::Element(s.clone(), e.to_string())
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let m = Mat::from_rows(&coeff_core, rows_e);
                if m.rows != spec.ranks[k] || m.cols != *spec.ranks.get(k + 1).unwrap_or(&0) {
                    return Err(ScenarioError::Module(format!(
                        "differential {k} has shape {}x{}, expected {}x{}",
                        m.rows,
                        m.cols,
                        spec.ranks[k],
                        spec.ranks.get(k + 1).unwrap_or(&0)
                    )));
                }
                diffs.push(m);
            }
            BoundedComplex::new(
                carrier,
                coeff_core.clone(),
                spec.min_degree,
                spec.ranks.clone(),
                diffs,
            )
            .map_err(|e| ScenarioError::Module(e.to_string()))?
        }
    };
    let corrupt_face = match &file.corrupt_face {
        None => None,
        Some(c) => {
            let flag = Flag::new(c.flag.clone())
                .ok_or_else(|| ScenarioError::UnknownFlag(format!("{:?}", c.flag)))?;
            Some((flag, c.spot))
        }
    };
    let parse_opt = |s: &Option<String>| -> Result<Option<Elem>, ScenarioError> {
        match s {
            None => Ok(None),
            Some(s) => parse_elem(s, &coeff_core)
                .map(Some)
                .map_err(|e| ScenarioError::Element(s.clone(), e.to_string())),
        }
    };
    Ok(Scenario {
        poset,
        coefficient,
        variant: file.variant,
        corrupt_face,
        replace_entry_with_residue: parse_opt(&file.replace_entry_with_residue)?,
        torsion_cospan: parse_opt(&file.torsion_cospan)?,
    })
}

pub fn coefficient_core(poset: &SpectrumPoset) -> CoreRing {
    match poset.ambient {
        Ambient::Full => poset.base.core(),
        Ambient::Semilocal => {
            let closed: Vec<&AlgPrime> = poset
                .primes
                .iter()
                .zip(&poset.dims)
                .filter(|(_, d)| **d == 0)
                .map(|(p, _)| p)
                .collect();
            let ints: Vec<_> = closed.iter().filter_map(|p| p.int_gen()).collect();
            let polys: Vec<_> = closed.iter().filter_map(|p| p.uni_gen()).collect();
            poset.base.core().localized_at_primes(&ints, &polys)
        }
    }
}

impl Scenario {
    pub fn build_cube(&self) -> Result<CubeDiagram, adelic_core::cube::CubeError> {
        let mut cube = match self.variant {
            VariantSpec::Adelic => {
                adelic_core::cube::build_adelic_cube(&self.coefficient, &self.poset)?
            }
            VariantSpec::BeilinsonParshin => {
                adelic_core::cube::build_bp_cube(&self.coefficient, &self.poset)?
            }
        };
        if let Some((flag, spot)) = &self.corrupt_face {
            cube.corrupt_face(flag, *spot);
        }
        if let Some(p) = &self.replace_entry_with_residue {
            replace_completed_with_residue(&mut cube, p);
        }
        Ok(cube)
    }

    /// The module under test: the cospan counterexample when requested,
    /// the tensored-up coefficient otherwise.
    pub fn build_module(&self) -> Result<AdelicModule, adelic_core::modules::ModuleError> {
        match &self.torsion_cospan {
            Some(p) => Ok(torsion_cospan_module(&self.poset, p)),
            None => adelic_core::modules::tensor_up(&self.coefficient, &self.poset),
        }
    }
}

/// The corrupted control: the completed factor at the given closed point
/// becomes its residue field, with the quotient augmentation.
fn replace_completed_with_residue(cube: &mut CubeDiagram, p: &Elem) {
    let closed = Flag::new(vec![0]).unwrap();
    let Ok(entry) = cube.entry(&closed).map(|e| e.clone()) else {
        return;
    };
    let core = entry.core.clone();
    let residue = BoundedComplex::cyclic(entry.carrier.clone(), core.clone(), p);
    cube.entries.insert(closed.clone(), residue.clone());
    if let Some(corner) = cube.entries.get(&Flag::new(vec![1, 0]).unwrap()).cloned() {
        cube.entries.insert(
            Flag::new(vec![1, 0]).unwrap(),
            residue.with_carrier(corner.carrier.clone()),
        );
    }
    cube.augmentations.insert(
        closed,
        FaceMap {
            kind: FaceKind::Augmentation,
            spot: 0,
            comps: vec![(0, Mat::identity(&core, 1))],
        },
    );
    let corner_flag = Flag::new(vec![1, 0]).unwrap();
    cube.faces.insert(
        (corner_flag.clone(), 0),
        FaceMap {
            kind: FaceKind::LocalizeUnit,
            spot: 0,
            comps: vec![(0, Mat::identity(&core, 1)), (1, Mat::identity(&core, 1))],
        },
    );
    cube.faces.insert(
        (corner_flag, 1),
        FaceMap {
            kind: FaceKind::Coefficient,
            spot: 1,
            comps: vec![],
        },
    );
    cube.variant = CubeVariant::Custom;
}

/// The module (torsion; 0; 0) over the diagram base -> rationals <- base.
fn torsion_cospan_module(poset: &SpectrumPoset, p: &Elem) -> AdelicModule {
    let base = poset.base.clone();
    let core = coefficient_core(poset);
    let unit = BoundedComplex::unit(RingExpr::base(base.clone()), core.clone());
    let mut cube = adelic_core::cube::build_adelic_cube(&unit, poset)
        .expect("cospan cube over a validated poset");
    cube.variant = CubeVariant::Custom;
    let b_flag = Flag::new(vec![0]).unwrap();
    let c_flag = Flag::new(vec![1]).unwrap();
    let d_flag = Flag::new(vec![1, 0]).unwrap();
    let base_carrier = RingExpr::base(base.clone());
    let q_carrier = RingExpr::base(base.clone()).localize(AlgPrime::zero_ideal(base));
    cube.entries.insert(b_flag.clone(), unit.clone());
    cube.entries
        .insert(c_flag.clone(), unit.with_carrier(base_carrier.clone()));
    let q_unit = BoundedComplex::unit(q_carrier.clone(), CoreRing::Rationals);
    cube.entries.insert(d_flag.clone(), q_unit);
    let mut vertices = BTreeMap::new();
    vertices.insert(
        b_flag,
        BoundedComplex::cyclic(base_carrier.clone(), core.clone(), p),
    );
    vertices.insert(c_flag, BoundedComplex::zero(base_carrier, core.clone()));
    vertices.insert(d_flag.clone(), BoundedComplex::zero(q_carrier, core));
    let mut base_changes = BTreeMap::new();
    base_changes.insert(
        (d_flag.clone(), 0),
        FaceMap {
            kind: FaceKind::LocalizeUnit,
            spot: 0,
            comps: vec![],
        },
    );
    base_changes.insert(
        (d_flag, 1),
        FaceMap {
            kind: FaceKind::Coefficient,
            spot: 1,
            comps: vec![],
        },
    );
    AdelicModule {
        cube,
        vertices,
        base_changes,
        augmentations: BTreeMap::new(),
    }
}
