//! Base rings, field scalars, polynomials and ring elements.
//!
//! Everything here is exact: integers are arbitrary precision, rationals are
//! reduced fractions, prime-field elements are reduced residues and
//! polynomials carry exact coefficients. Localized rings represent elements
//! as fractions whose denominators are certified units of the localization.

mod elem;
mod parse;
mod poly;
mod prime;
mod scalar;

pub use elem::{int_valuation, poly_valuation, CoreRing, Elem};
pub use parse::{parse_elem, ParseError};
pub use poly::{deglex_cmp, BPoly, Mono, UPoly};
pub use prime::{bivariate_div_exact, bivariate_divides, int_prime, AlgPrime, PrimeError};
pub use scalar::{FieldSpec, Scalar};

use serde::{Deserialize, Serialize};
use std::fmt;

/// The concrete commutative Noetherian rings the engine works over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseRing {
    Integers,
    Rationals,
    PrimeField { p: u64 },
    UnivariatePoly { coeff: FieldSpec },
    BivariatePoly { coeff: FieldSpec },
}

impl BaseRing {
    pub fn is_field(&self) -> bool {
        matches!(self, BaseRing::Rationals | BaseRing::PrimeField { .. })
    }

    /// Krull dimension of the ring.
    pub fn dimension(&self) -> u32 {
        match self {
            BaseRing::Rationals | BaseRing::PrimeField { .. } => 0,
            BaseRing::Integers | BaseRing::UnivariatePoly { .. } => 1,
            BaseRing::BivariatePoly { .. } => 2,
        }
    }

    /// Coefficient field for polynomial rings; `None` otherwise.
    pub fn coeff_field(&self) -> Option<FieldSpec> {
        match self {
            BaseRing::UnivariatePoly { coeff } | BaseRing::BivariatePoly { coeff } => {
                Some(coeff.clone())
            }
            _ => None,
        }
    }

    /// The core ring whose elements present modules over this base.
    pub fn core(&self) -> CoreRing {
        match self {
            BaseRing::Integers => CoreRing::Integers,
            BaseRing::Rationals => CoreRing::Rationals,
            BaseRing::PrimeField { p } => CoreRing::PrimeField { p: *p },
            BaseRing::UnivariatePoly { coeff } => CoreRing::UniPoly {
                coeff: coeff.clone(),
            },
            BaseRing::BivariatePoly { coeff } => CoreRing::BiPoly {
                coeff: coeff.clone(),
            },
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "ZZ"),
            BaseRing::Rationals => write!(f, "QQ"),
            BaseRing::PrimeField { p } => write!(f, "GF({p})"),
            BaseRing::UnivariatePoly { coeff } => write!(f, "{coeff}[x]"),
            BaseRing::BivariatePoly { coeff } => write!(f, "{coeff}[x,y]"),
        }
    }
}
