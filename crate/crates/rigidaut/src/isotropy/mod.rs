//! Isotropy subgroups `Aut(δ)` of replicas `δ = h·D` of the canonical
//! derivation.
//!
//! The commutation oracle compares `δ(θ(g))` with `θ(δ(g))` on every ring
//! generator `g`; that suffices because `θδθ⁻¹` is again a derivation. Each
//! family also has a closed-form criterion, and [`IsotropyVerdict`] reports
//! both.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::autos::{compose, exp_automorphism, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::LaurentPoly;
use crate::models::{derive, Derivation, Family, Model};

mod descriptor;
mod families;
mod structure;
mod verify;

pub use descriptor::GroupDescriptor;
pub use families::{
    dds_closed_form, dds_membership, dvcon_closed_form, dvcon_membership, dvgen_closed_form,
    dvgen_membership, fm_closed_form, fm_erratum, fm_exponent, fm_membership, gds_closed_form,
    gds_membership, membership, FM_REMARK_ERRATUM,
};
pub use structure::{
    dds_lambda_order, dvcon_structure, fm_structure, gds_structure, structure,
    structure_generators, LambdaCase, StructureReport, UNKNOWN,
};
pub use verify::{cross_verify, SampleRecord, VerifyReport};

/// A generator on which `δθ` and `θδ` differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub generator: String,
    /// `δ(θ(g))`.
    pub lhs: LaurentPoly,
    /// `θ(δ(g))`.
    pub rhs: LaurentPoly,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("generator", &self.generator)?;
        st.serialize_field("lhs", &self.lhs.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyVerdict {
    /// `None` when no closed form applies.
    pub closed_form: Option<bool>,
    pub oracle: bool,
    pub witness: Option<Witness>,
    pub discrepancy: bool,
    /// Set when the discrepancy is a known misstatement in the literature.
    pub erratum: Option<String>,
}

impl IsotropyVerdict {
    pub(crate) fn new(closed_form: Option<bool>, oracle: (bool, Option<Witness>)) -> Self {
        let discrepancy = closed_form.is_some_and(|c| c != oracle.0);
        IsotropyVerdict {
            closed_form,
            oracle: oracle.0,
            witness: oracle.1,
            discrepancy,
            erratum: None,
        }
    }

    /// A discrepancy not explained by a recorded erratum.
    pub fn is_undocumented_discrepancy(&self) -> bool {
        self.discrepancy && self.erratum.is_none()
    }
}

impl Serialize for IsotropyVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IsotropyVerdict", 5)?;
        match self.closed_form {
            Some(c) => st.serialize_field("closed_form", &c)?,
            None => st.serialize_field("closed_form", "n/a")?,
        }
        st.serialize_field("oracle", &self.oracle)?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("discrepancy", &self.discrepancy)?;
        st.serialize_field("erratum", &self.erratum)?;
        st.end()
    }
}

fn same_model(model: &Model, theta: &Automorphism, d: &Derivation) -> Result<()> {
    theta.check(model)?;
    if d.model_id() != model.id() {
        return Err(Error::validation("model mismatch"));
    }
    Ok(())
}

/// Generator-level commutation test; returns the first failing generator.
pub fn oracle(
    model: &Model,
    theta: &Automorphism,
    d: &Derivation,
) -> Result<(bool, Option<Witness>)> {
    same_model(model, theta, d)?;
    for (name, g) in model.generators() {
        let lhs = derive(model, d, &theta.apply(model, g)?);
        let rhs = theta.apply(model, &derive(model, d, g))?;
        if lhs != rhs {
            return Ok((
                false,
                Some(Witness {
                    generator: name.name().to_string(),
                    lhs,
                    rhs,
                }),
            ));
        }
    }
    Ok((true, None))
}

/// The oracle alone, with no closed form.
pub fn commutes(model: &Model, theta: &Automorphism, d: &Derivation) -> Result<IsotropyVerdict> {
    Ok(IsotropyVerdict::new(None, oracle(model, theta, d)?))
}

/// Whether `θ` commutes with `Exp(f·δ)`, and whether `θ(f) = f`.
pub fn centralizer_test(
    model: &Model,
    theta: &Automorphism,
    f: &LaurentPoly,
    d: &Derivation,
) -> Result<(bool, bool)> {
    if !oracle(model, theta, d)?.0 {
        return Err(Error::math("θ not in Aut(δ)"));
    }
    let e = exp_automorphism(model, d, f)?;
    let commutes_with_exp = compose(model, theta, &e)? == compose(model, &e, theta)?;
    let fixes_f = &theta.apply(model, f)? == f;
    Ok((commutes_with_exp, fixes_f))
}

pub(crate) fn require(model: &Model, family: Family) -> Result<()> {
    if model.family() != family {
        return Err(Error::validation("model mismatch"));
    }
    Ok(())
}
