//! Family specifications, their localization models, membership and
//! derivations.

mod derivation;
mod membership;
mod model;
mod spec;

pub use derivation::{
    canonical_derivation, canonical_formulas, conjugate_derivation, derive, exp_apply,
    generator_images, kernel_test, nilpotency_index, replica, replica_factor, Derivation,
    DEFAULT_CAP,
};
pub use model::{build_model, kernel_monomial, Model};
pub use spec::{kernel_names, parse_variety, Family, VarietySpec, DEFAULT_CONDUCTOR};
