//! Automorphisms of double Danielewski surfaces: `x ↦ λx`, `y1 ↦ a·y1 + b(x)`.

use std::collections::BTreeMap;

use super::gds::scale_x;
use super::{check_images_in_ring, AutParams, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::{CycScalar, LaurentPoly, Var};
use crate::models::{Family, Model};

#[derive(Clone, Debug, PartialEq)]
pub struct DdsParams {
    pub lambda: CycScalar,
    pub a: CycScalar,
    /// Polynomial in `x`.
    pub b: LaurentPoly,
}

impl DdsParams {
    /// "first, then self" on the variety.
    pub fn compose(&self, first: &DdsParams) -> Result<DdsParams> {
        let b = &first.b.scale(&self.a) + &scale_x(&self.b, &first.lambda);
        Ok(DdsParams {
            lambda: &self.lambda * &first.lambda,
            a: &self.a * &first.a,
            b,
        })
    }

    pub fn inverse(&self) -> Result<DdsParams> {
        let lambda = self.lambda.inverse()?;
        let a = self.a.inverse()?;
        let b = scale_x(&self.b, &lambda).scale(&-&a);
        Ok(DdsParams { lambda, a, b })
    }
}

fn images_of(model: &Model, p: &DdsParams) -> BTreeMap<Var, LaurentPoly> {
    [
        (Var::new("x"), model.var("x").scale(&p.lambda)),
        (Var::new("y1"), &model.var("y1").scale(&p.a) + &p.b),
    ]
    .into_iter()
    .collect()
}

pub(crate) fn dds_build(model: &Model, p: &DdsParams, check: bool) -> Result<Automorphism> {
    if model.family() != Family::Dds {
        return Err(Error::validation("model mismatch"));
    }
    if p.lambda.is_zero() || p.a.is_zero() {
        return Err(Error::math("lambda and a must be nonzero"));
    }
    if p.b
        .terms()
        .keys()
        .any(|m| m.has_negative() || m.vars().any(|v| v.name() != "x"))
    {
        return Err(Error::validation("b must be a polynomial in x"));
    }
    let inv = p.inverse()?;
    let images = images_of(model, p);
    let inverse_images = images_of(model, &inv);
    if check {
        check_images_in_ring(model, &images)?;
        check_images_in_ring(model, &inverse_images)?;
    }
    Ok(Automorphism::from_parts(
        model,
        AutParams::Dds(p.clone()),
        images,
        inverse_images,
    ))
}

/// The automorphism with `x ↦ λx`, `y1 ↦ a·y1 + b(x)`; the forced images of
/// `y2` and `y3` must lie in the coordinate ring.
pub fn dds_automorphism(
    model: &Model,
    lambda: &CycScalar,
    a: &CycScalar,
    b: &LaurentPoly,
) -> Result<Automorphism> {
    dds_build(
        model,
        &DdsParams {
            lambda: lambda.clone(),
            a: a.clone(),
            b: b.clone(),
        },
        true,
    )
}

/// The same substitution on the localization, without the membership check.
pub fn dds_localized(
    model: &Model,
    lambda: &CycScalar,
    a: &CycScalar,
    b: &LaurentPoly,
) -> Result<Automorphism> {
    dds_build(
        model,
        &DdsParams {
            lambda: lambda.clone(),
            a: a.clone(),
            b: b.clone(),
        },
        false,
    )
}
