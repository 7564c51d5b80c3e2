//! Buchberger engine for the bivariate polynomial ring: reduced Groebner
//! bases in degree-lex order, module bases with syzygies, ideal and module
//! membership, and homology of matrix pairs reported as a zero/nonzero flag
//! with a Hilbert-series fingerprint in the homogeneous case.

mod buchberger;
mod homology;
mod module;

pub use buchberger::{
    buchberger, ideal_intersection, ideal_membership, normal_form, reduce_basis,
};
pub use homology::{groebner_homology, GroebnerHomology};
pub use module::{module_groebner, module_membership, syzygies, ModVec};

pub const DEFAULT_DEGREE_CAP: u32 = 24;

use std::sync::atomic::{AtomicU32, Ordering};

static DEGREE_CAP: AtomicU32 = AtomicU32::new(DEFAULT_DEGREE_CAP);

/// The degree cap consulted by homology computations.
pub fn degree_cap() -> u32 {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Override the degree cap (the command line surface).
pub fn set_degree_cap(cap: u32) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroebnerError {
    #[error("basis exceeded total degree cap {0}")]
    DegreeBoundExceeded(u32),
    #[error("composition d_out * d_in is nonzero")]
    CompositionNonzero,
    #[error("coefficient field mismatch")]
    FieldMismatch,
}
