//! Automorphisms of the Finston–Maubach threefold.
//!
//! `FmParams { mu, f }` acts by `x ↦ μ^bc·x`, `y ↦ μ^ac·y`, `z ↦ μ^ab·z`,
//! `v ↦ μ^(−nac)·v + f·x^m`; `μ = 1` gives the additive maps and `f = 0` the
//! multiplicative ones.

use std::collections::BTreeMap;

use super::{AutParams, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::{CycScalar, LaurentPoly, Var};
use crate::models::{Model, VarietySpec};

#[derive(Clone, Debug, PartialEq)]
pub struct FmParams {
    pub mu: CycScalar,
    /// Element of `R = k[x,y,z]/(x^a+y^b+z^c)`.
    pub f: LaurentPoly,
}

/// `(a, b, c, m, n)` of an FM model.
pub(crate) fn fm_data(model: &Model) -> Result<(i64, i64, i64, i64, i64)> {
    match model.spec() {
        VarietySpec::Fm { a, b, c, m, n } => {
            Ok((*a as i64, *b as i64, *c as i64, *m as i64, *n as i64))
        }
        _ => Err(Error::validation("model mismatch")),
    }
}

/// `θ_μ(f) = f(μ^bc·x, μ^ac·y, μ^ab·z)`.
pub fn theta(model: &Model, mu: &CycScalar, f: &LaurentPoly) -> Result<LaurentPoly> {
    let (a, b, c, _, _) = fm_data(model)?;
    let (x, y, z) = (Var::new("x"), Var::new("y"), Var::new("z"));
    Ok(f.scale_by_monomial_weight(|mono| {
        mu.pow(b * c * mono.exponent(&x) + a * c * mono.exponent(&y) + a * b * mono.exponent(&z))
    }))
}

impl FmParams {
    /// "first, then self" on the variety.
    pub fn compose(&self, model: &Model, first: &FmParams) -> Result<FmParams> {
        let (a, b, c, m, n) = fm_data(model)?;
        let f = &first.f.scale(&self.mu.pow(-n * a * c))
            + &theta(model, &first.mu, &self.f)?.scale(&first.mu.pow(m * b * c));
        Ok(FmParams {
            mu: &self.mu * &first.mu,
            f: model.reduce(&f),
        })
    }

    pub fn inverse(&self, model: &Model) -> Result<FmParams> {
        let (a, b, c, m, n) = fm_data(model)?;
        let mu_inv = self.mu.inverse()?;
        let f = theta(model, &mu_inv, &self.f)?.scale(&-self.mu.pow(n * a * c - m * b * c));
        Ok(FmParams { mu: mu_inv, f })
    }
}

fn images_of(model: &Model, p: &FmParams) -> Result<BTreeMap<Var, LaurentPoly>> {
    let (a, b, c, m, n) = fm_data(model)?;
    let xm = LaurentPoly::var_pow(model.context(), "x", m);
    Ok([
        (Var::new("x"), model.var("x").scale(&p.mu.pow(b * c))),
        (Var::new("y"), model.var("y").scale(&p.mu.pow(a * c))),
        (Var::new("z"), model.var("z").scale(&p.mu.pow(a * b))),
        (
            Var::new("v"),
            &model.var("v").scale(&p.mu.pow(-n * a * c)) + &model.reduce(&(&p.f * &xm)),
        ),
    ]
    .into_iter()
    .collect())
}

pub(crate) fn fm_automorphism(model: &Model, p: &FmParams) -> Result<Automorphism> {
    fm_data(model)?;
    if p.mu.is_zero() {
        return Err(Error::math("mu must be nonzero"));
    }
    let allowed = ["x", "y", "z"];
    if p.f
        .terms()
        .keys()
        .any(|m| m.has_negative() || m.vars().any(|v| !allowed.contains(&v.name())))
    {
        return Err(Error::validation("f must be a polynomial in x, y, z"));
    }
    let p = FmParams {
        mu: p.mu.clone(),
        f: model.reduce(&p.f),
    };
    let inv = p.inverse(model)?;
    Ok(Automorphism::from_parts(
        model,
        AutParams::Fm(p.clone()),
        images_of(model, &p)?,
        images_of(model, &inv)?,
    ))
}

/// `θ_f^+`: `u ↦ u + f·y^n`, `v ↦ v + f·x^m`.
pub fn fm_plus(model: &Model, f: &LaurentPoly) -> Result<Automorphism> {
    fm_automorphism(
        model,
        &FmParams {
            mu: model.context().one(),
            f: f.clone(),
        },
    )
}

/// `θ_μ^*`.
pub fn fm_star(model: &Model, mu: &CycScalar) -> Result<Automorphism> {
    fm_automorphism(
        model,
        &FmParams {
            mu: mu.clone(),
            f: model.zero(),
        },
    )
}

/// The images of `u` under `θ_f^+`, for direct comparison.
pub fn fm_plus_u_image(model: &Model, f: &LaurentPoly) -> Result<LaurentPoly> {
    let (_, _, _, _, n) = fm_data(model)?;
    let u = model.generator("u").expect("fm").clone();
    Ok(model.reduce(&(&u + &(f * &LaurentPoly::var_pow(model.context(), "y", n)))))
}
