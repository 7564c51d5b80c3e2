use super::{CubeDiagram, CubeError, CubeVariant, FaceKind, FaceMap};
use crate::complex::BoundedComplex;
use crate::expr::{normalize, FamilyConstraint, PrimeFamily, PrimeSlot, RingExpr};
use crate::spectrum::{Ambient, Flag, SpectrumPoset};
use std::collections::BTreeMap;

/// Carrier of the cube entry at a flag, per the nested product formula:
/// the level-i product runs over primes of the i-th flag dimension inside
/// the enclosing prime, localized there, with the innermost level completed
/// (and, in the Beilinson-Parshin variant, every level completed).
pub fn entry_carrier(
    poset: &SpectrumPoset,
    flag: &Flag,
    variant: CubeVariant,
) -> RingExpr {
    let base = RingExpr::base(poset.base.clone());
    let expr = build_level(poset, &flag.0, 0, None, &base, variant);
    normalize(&expr)
}

/// Is the product at a level with the given dimension finite (enumerate the
/// declared primes) or a symbolic family?
fn level_is_finite(poset: &SpectrumPoset, dim: u32) -> bool {
    match poset.ambient {
        Ambient::Semilocal => true,
        // in a full ambient spectrum only the top dimension is a finite
        // level (the generic points of an irreducible base)
        Ambient::Full => dim == poset.dimension(),
    }
}

/// Part of the enclosing context a level needs: either a concrete prime or
/// "the variable of the enclosing family".
#[derive(Clone)]
enum Enclosing {
    Prime(crate::ring::AlgPrime),
    Var,
}

fn build_level(
    poset: &SpectrumPoset,
    dims: &[u32],
    level: usize,
    enclosing: Option<Enclosing>,
    base: &RingExpr,
    variant: CubeVariant,
) -> RingExpr {
    let d = dims[level];
    if level_is_finite(poset, d) {
        let mut children = vec![];
        for (i, p) in poset.primes.iter().enumerate() {
            if poset.dims[i] != d {
                continue;
            }
            let ok = match &enclosing {
                None => true,
                Some(Enclosing::Prime(q)) => p.contains_prime(q) && p != q,
                Some(Enclosing::Var) => unreachable!("finite level under a family"),
            };
            if !ok {
                continue;
            }
            let inner = if level + 1 < dims.len() {
                build_level(
                    poset,
                    dims,
                    level + 1,
                    Some(Enclosing::Prime(p.clone())),
                    base,
                    variant,
                )
            } else {
                completed_leaf(base, &PrimeSlot::Fixed(p.clone()))
            };
            children.push(wrap_level(
                inner,
                &PrimeSlot::Fixed(p.clone()),
                level + 1 == dims.len(),
                variant,
            ));
        }
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            RingExpr::FiniteProduct(children)
        }
    } else {
        let constraint = match &enclosing {
            None => FamilyConstraint::None,
            Some(Enclosing::Prime(q)) => FamilyConstraint::Under(q.clone()),
            Some(Enclosing::Var) => FamilyConstraint::UnderEnclosing,
        };
        let inner = if level + 1 < dims.len() {
            build_level(poset, dims, level + 1, Some(Enclosing::Var), base, variant)
        } else {
            completed_leaf(base, &PrimeSlot::Var)
        };
        let template = wrap_level(inner, &PrimeSlot::Var, level + 1 == dims.len(), variant);
        RingExpr::FamilyProduct {
            family: PrimeFamily {
                base: poset.base.clone(),
                dim: d,
                constraint,
            },
            template: Box::new(template),
        }
    }
}

/// The innermost content: the completion of the local ring at the leaf
/// prime (the completed coefficient ring).
fn completed_leaf(base: &RingExpr, slot: &PrimeSlot) -> RingExpr {
    RingExpr::Complete(
        Box::new(RingExpr::Localize(Box::new(base.clone()), slot.clone())),
        slot.clone(),
    )
}

/// Wrap one product level: localization at the level prime; the
/// Beilinson-Parshin variant completes every level, not just the innermost.
fn wrap_level(inner: RingExpr, slot: &PrimeSlot, innermost: bool, variant: CubeVariant) -> RingExpr {
    match variant {
        // the adelic variant localizes at every level; the innermost leaf
        // already carries its completion
        CubeVariant::Adelic | CubeVariant::Custom => {
            let _ = innermost;
            RingExpr::Localize(Box::new(inner), slot.clone())
        }
        CubeVariant::BeilinsonParshin => {
            if innermost {
                // leaf is complete o localize already
                inner
            } else {
                RingExpr::Complete(
                    Box::new(RingExpr::Localize(Box::new(inner), slot.clone())),
                    slot.clone(),
                )
            }
        }
    }
}

/// Build the adelic approximation cube of a coefficient complex.
pub fn build_adelic_cube(
    m: &BoundedComplex,
    poset: &SpectrumPoset,
) -> Result<CubeDiagram, CubeError> {
    build_cube(m, poset, CubeVariant::Adelic)
}

/// Build the variant with localized completions at every level.
pub fn build_bp_cube(
    m: &BoundedComplex,
    poset: &SpectrumPoset,
) -> Result<CubeDiagram, CubeError> {
    build_cube(m, poset, CubeVariant::BeilinsonParshin)
}

fn build_cube(
    m: &BoundedComplex,
    poset: &SpectrumPoset,
    variant: CubeVariant,
) -> Result<CubeDiagram, CubeError> {
    let r = poset.dimension();
    let mut entries = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut augmentations = BTreeMap::new();
    for (flag, _) in poset.enumerate_flags() {
        let carrier = entry_carrier(poset, &flag, variant);
        // over a product-free carrier the presentation moves to the local
        // core; product entries stay uniform over the coefficient core
        let entry = match carrier.local_core() {
            Some(lc) => m
                .base_changed(&lc.core)
                .unwrap_or_else(|| m.clone())
                .with_carrier(carrier),
            None => m.with_carrier(carrier),
        };
        // faces into this flag: one per position
        if flag.len() >= 2 {
            for spot in 0..flag.len() {
                let kind = if spot + 1 == flag.len() {
                    FaceKind::Coefficient
                } else {
                    FaceKind::LocalizeUnit
                };
                faces.insert(
                    (flag.clone(), spot),
                    FaceMap::identity_shaped(kind, spot, m),
                );
            }
        } else {
            augmentations.insert(
                flag.clone(),
                FaceMap::identity_shaped(FaceKind::Augmentation, 0, m),
            );
        }
        entries.insert(flag, entry);
    }
    Ok(CubeDiagram {
        variant,
        r,
        poset: poset.clone(),
        coefficient: m.clone(),
        entries,
        faces,
        augmentations,
    })
}

/// Product-free carrier of a single chain factor of an entry: the nested
/// localizations and completions instantiated at the chain's primes.
pub fn chain_carrier(
    poset: &SpectrumPoset,
    chain: &[usize],
    variant: CubeVariant,
) -> RingExpr {
    let primes: Vec<crate::ring::AlgPrime> =
        chain.iter().map(|&i| poset.primes[i].clone()).collect();
    chain_carrier_primes(&poset.base, &primes, variant)
}

/// As `chain_carrier`, from explicit primes.
pub fn chain_carrier_primes(
    base: &crate::ring::BaseRing,
    chain: &[crate::ring::AlgPrime],
    variant: CubeVariant,
) -> RingExpr {
    let base_expr = RingExpr::base(base.clone());
    let leaf = chain.last().expect("nonempty chain").clone();
    let mut expr = completed_leaf(&base_expr, &PrimeSlot::Fixed(leaf.clone()));
    if !matches!(variant, CubeVariant::BeilinsonParshin) {
        expr = RingExpr::Localize(Box::new(expr), PrimeSlot::Fixed(leaf));
    }
    for p in chain.iter().rev().skip(1) {
        expr = match variant {
            CubeVariant::Adelic | CubeVariant::Custom => {
                RingExpr::Localize(Box::new(expr), PrimeSlot::Fixed(p.clone()))
            }
            CubeVariant::BeilinsonParshin => RingExpr::Complete(
                Box::new(RingExpr::Localize(
                    Box::new(expr),
                    PrimeSlot::Fixed(p.clone()),
                )),
                PrimeSlot::Fixed(p.clone()),
            ),
        };
    }
    normalize(&expr)
}
