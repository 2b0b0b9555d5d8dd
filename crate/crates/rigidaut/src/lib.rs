//! Exact computations with locally nilpotent derivations and automorphism
//! groups of five families of almost rigid affine domains.
//!
//! Every coordinate ring is embedded in a Laurent polynomial ring over a
//! cyclotomic field by inverting its kernel coordinates. Equality, derivations
//! and automorphisms are all computed inside that ring.

pub mod autos;
pub mod error;
pub mod exactalg;
pub mod fileformat;
pub mod isotropy;
pub mod models;

pub use error::{Error, ErrorKind, Result};
pub use exactalg::{
    cyclotomic_context, CycScalar, FieldContext, LaurentPoly, Monomial, Roster, Var,
};
