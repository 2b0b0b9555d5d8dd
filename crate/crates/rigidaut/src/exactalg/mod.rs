//! Exact arithmetic: rationals, cyclotomic fields and sparse Laurent
//! polynomials with substitution, differentiation and division.

pub mod cyclotomic;
pub mod parse;
pub mod poly;
pub mod rational;

pub use cyclotomic::{cyclotomic_context, scalar_order, CycScalar, FieldContext};
pub use parse::{parse_poly, parse_scalar, Roster};
pub use poly::{LaurentPoly, Monomial, Var};
pub use rational::{exponent_gcd, rat, Rational};
