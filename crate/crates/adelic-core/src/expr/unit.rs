use super::{ExprError, PrimeSlot, RingExpr};
use crate::ring::{BaseRing, Elem};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitVerdict {
    Unit,
    NonUnit,
    Zero,
}

/// A checkable verdict on invertibility of a base-ring element in the ring
/// denoted by an expression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitCertificate {
    pub element: String,
    pub expr: String,
    pub verdict: UnitVerdict,
    pub witness: String,
}

impl UnitCertificate {
    pub fn is_unit(&self) -> bool {
        self.verdict == UnitVerdict::Unit
    }
}

/// Decide invertibility of `e` in the ring denoted by `expr`.
///
/// The witness is independently checkable: non-membership in a localizing
/// prime, invertibility modulo the completion prime, or a base-ring unit.
pub fn is_unit(e: &Elem, expr: &RingExpr) -> Result<UnitCertificate, ExprError> {
    let verdict = |v: UnitVerdict, witness: String| UnitCertificate {
        element: e.to_string(),
        expr: expr.to_string(),
        verdict: v,
        witness,
    };
    if e.is_zero() {
        return Ok(verdict(UnitVerdict::Zero, "element is zero".into()));
    }
    match expr {
        RingExpr::Base(r) => {
            let unit = base_unit(r, e);
            if unit {
                Ok(verdict(UnitVerdict::Unit, "unit of the base ring".into()))
            } else {
                Ok(verdict(
                    UnitVerdict::NonUnit,
                    "non-unit of the base ring".into(),
                ))
            }
        }
        RingExpr::Localize(child, PrimeSlot::Fixed(p)) => {
            if !p.contains(e) {
                Ok(verdict(
                    UnitVerdict::Unit,
                    format!("{e} not contained in localizing prime {p}"),
                ))
            } else {
                let inner = is_unit(e, child)?;
                Ok(verdict(inner.verdict, inner.witness))
            }
        }
        RingExpr::Complete(child, PrimeSlot::Fixed(p)) => {
            if !p.contains(e) {
                Ok(verdict(
                    UnitVerdict::Unit,
                    format!("{e} invertible modulo the completion prime {p}"),
                ))
            } else {
                let inner = is_unit(e, child)?;
                // completion cannot create units inside its maximal ideal
                match inner.verdict {
                    UnitVerdict::Unit => Ok(verdict(
                        UnitVerdict::NonUnit,
                        format!("{e} lies in the completion prime {p}"),
                    )),
                    v => Ok(verdict(v, inner.witness)),
                }
            }
        }
        RingExpr::FiniteProduct(children) => {
            let mut witnesses = vec![];
            for c in children {
                let cert = is_unit(e, c)?;
                if cert.verdict != UnitVerdict::Unit {
                    return Ok(verdict(cert.verdict, cert.witness));
                }
                witnesses.push(cert.witness);
            }
            Ok(verdict(
                UnitVerdict::Unit,
                format!("unit in every factor: {}", witnesses.join("; ")),
            ))
        }
        RingExpr::FamilyProduct { .. } => Err(ExprError::UnsupportedExpression),
        RingExpr::Localize(_, PrimeSlot::Var) | RingExpr::Complete(_, PrimeSlot::Var) => Err(
            ExprError::InvalidExpr("free family variable in unit test".into()),
        ),
    }
}

fn base_unit(r: &BaseRing, e: &Elem) -> bool {
    match (r, e) {
        (BaseRing::Integers, Elem::Int(n)) => {
            use num_traits::Signed;
            use num_traits::One;
            n.abs().is_one()
        }
        (BaseRing::Rationals, Elem::Rat(_)) => true,
        (BaseRing::PrimeField { .. }, Elem::Fp { .. }) => true,
        (BaseRing::UnivariatePoly { .. }, Elem::Uni(f)) => f.is_constant() && !f.is_zero(),
        (BaseRing::BivariatePoly { .. }, Elem::Bi(f)) => f.is_constant() && !f.is_zero(),
        _ => false,
    }
}
