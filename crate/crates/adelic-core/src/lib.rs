//! Exact computational engine for adelic approximation cubes over derived
//! categories of concrete commutative Noetherian rings.
//!
//! The crate builds punctured cubes of localized completed rings, checks
//! their cochain law, and decides homotopy-pullback status by reducing
//! against Koszul test objects and localizing at generic points, all with
//! exact integer, rational and polynomial arithmetic.

pub mod complex;
pub mod cube;
pub mod verifier;
pub mod expr;
pub mod functors;
pub mod groebner;
pub mod linalg;
pub mod modules;
pub mod ring;
pub mod spectrum;

pub use complex::{BoundedComplex, ComplexMap};
pub use expr::{RingExpr, UnitCertificate};
pub use functors::KoszulData;
pub use linalg::{Mat, ModuleInvariants};
pub use ring::{AlgPrime, BaseRing, CoreRing, Elem, FieldSpec};
pub use spectrum::{Ambient, Flag, SpectrumPoset};
