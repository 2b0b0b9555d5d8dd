//! Automorphisms of the five families.
//!
//! An [`Automorphism`] stores family parameters together with the images of
//! the model coordinates and of their inverse. `compose(second, first)` is the
//! automorphism "first, then second" of the variety; on functions,
//! `apply(compose(s, f), e) = apply(f, apply(s, e))`. This is the order in
//! which the GDS composition law on data is exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, Var};
use crate::models::{exp_apply, Derivation, Model};

pub mod dds;
pub mod dv;
pub mod file;
pub mod fm;
pub mod gds;

pub use dds::{dds_automorphism, dds_localized, DdsParams};
pub use dv::{
    dvcon_quasitorus, dvcon_symmetry, dvcon_torus, dvgen_element, pzv_decompose, PzvDecomposition,
    Scaling,
};
pub use file::parse_automorphism;
pub use fm::{fm_plus, fm_star, FmParams};
pub use gds::{
    gds_automorphism, gds_compose_data, gds_generator, gds_inverse_datum, gds_tau,
    gds_validate_datum, GdsDatum, GdsGenerator, TauKind,
};

/// Family parameters of an automorphism.
#[derive(Clone, Debug, PartialEq)]
pub enum AutParams {
    Gds(GdsDatum),
    /// Permutation–scaling data of a Danielewski variety.
    Scaling(Scaling),
    Fm(FmParams),
    Dds(DdsParams),
    /// Known only through its coordinate images (exponentials, mixed compositions).
    Map,
}

fn list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for AutParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutParams::Gds(d) => {
                let alpha = if d.alpha_is_identity() {
                    "id".to_string()
                } else {
                    list(d.alpha.iter().map(|i| i + 1))
                };
                write!(f, "({alpha}, {}, {}, {})", d.mu, d.a, d.b)
            }
            AutParams::Scaling(s) => {
                write!(
                    f,
                    "sigma={} t={} tz={}",
                    list(s.sigma.iter().map(|i| i + 2)),
                    list(&s.t),
                    s.tz
                )
            }
            AutParams::Fm(p) => write!(f, "mu={} f={}", p.mu, p.f),
            AutParams::Dds(p) => write!(f, "lambda={} a={} b={}", p.lambda, p.a, p.b),
            AutParams::Map => f.write_str("map"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Automorphism {
    model_id: Arc<str>,
    params: AutParams,
    images: BTreeMap<Var, LaurentPoly>,
    inverse_images: BTreeMap<Var, LaurentPoly>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.model_id == other.model_id && self.images == other.images
    }
}

fn mismatch() -> Error {
    Error::validation("model mismatch")
}

impl Automorphism {
    pub(crate) fn from_parts(
        model: &Model,
        params: AutParams,
        images: BTreeMap<Var, LaurentPoly>,
        inverse_images: BTreeMap<Var, LaurentPoly>,
    ) -> Self {
        Automorphism {
            model_id: Arc::from(model.id()),
            params,
            images,
            inverse_images,
        }
    }

    pub fn identity(model: &Model) -> Self {
        let images: BTreeMap<Var, LaurentPoly> = model
            .coordinates()
            .vars()
            .map(|v| (v.clone(), model.var(v.name())))
            .collect();
        Self::from_parts(model, AutParams::Map, images.clone(), images)
    }

    pub fn params(&self) -> &AutParams {
        &self.params
    }

    pub fn images(&self) -> &BTreeMap<Var, LaurentPoly> {
        &self.images
    }

    pub fn inverse_images(&self) -> &BTreeMap<Var, LaurentPoly> {
        &self.inverse_images
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        if &*self.model_id != model.id() {
            return Err(mismatch());
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(v, img)| {
            img.as_monomial_unit()
                .is_some_and(|(c, m)| c.is_one() && m.pairs() == [(v.clone(), 1)])
        })
    }

    fn substitution(images: &BTreeMap<Var, LaurentPoly>) -> HashMap<Var, LaurentPoly> {
        images.iter().map(|(v, p)| (v.clone(), p.clone())).collect()
    }

    /// Image of an element.
    pub fn apply(&self, model: &Model, e: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(model)?;
        Ok(model.reduce(&e.substitute(&Self::substitution(&self.images))?))
    }

    /// Image of an element under the inverse.
    pub fn apply_inverse(&self, model: &Model, e: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(model)?;
        Ok(model.reduce(&e.substitute(&Self::substitution(&self.inverse_images))?))
    }

    /// Images of all ring generators, in presentation order.
    pub fn generator_images(&self, model: &Model) -> Result<Vec<(Var, LaurentPoly)>> {
        model
            .generators()
            .iter()
            .map(|(g, img)| Ok((g.clone(), self.apply(model, img)?)))
            .collect()
    }

    pub fn inverse(&self, model: &Model) -> Result<Automorphism> {
        self.check(model)?;
        let params = match &self.params {
            AutParams::Gds(d) => AutParams::Gds(gds::gds_inverse_datum(model, d)?),
            AutParams::Scaling(s) => AutParams::Scaling(s.inverse()?),
            AutParams::Fm(f) => AutParams::Fm(f.inverse(model)?),
            AutParams::Dds(p) => AutParams::Dds(p.inverse()?),
            AutParams::Map => AutParams::Map,
        };
        Ok(Automorphism {
            model_id: self.model_id.clone(),
            params,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        })
    }

    /// Map-level composition: "first, then second" on the variety.
    fn compose_maps(
        model: &Model,
        second: &Self,
        first: &Self,
    ) -> Result<(BTreeMap<Var, LaurentPoly>, BTreeMap<Var, LaurentPoly>)> {
        let mut images = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for v in model.coordinates().vars() {
            let s = second.images.get(v).ok_or_else(mismatch)?;
            images.insert(v.clone(), first.apply(model, s)?);
            let fi = first.inverse_images.get(v).ok_or_else(mismatch)?;
            inverse.insert(v.clone(), second.apply_inverse(model, fi)?);
        }
        Ok((images, inverse))
    }
}

/// `second ∘ first`; parameter-level when both carry parameters of the same
/// kind, with the result checked against map-level composition.
pub fn compose(model: &Model, second: &Automorphism, first: &Automorphism) -> Result<Automorphism> {
    second.check(model)?;
    first.check(model)?;
    if second.is_identity() {
        return Ok(first.clone());
    }
    if first.is_identity() {
        return Ok(second.clone());
    }
    let (images, inverse) = Automorphism::compose_maps(model, second, first)?;
    let built = match (&second.params, &first.params) {
        (AutParams::Gds(d2), AutParams::Gds(d1)) => Some(gds::gds_automorphism(
            model,
            &gds::gds_compose_data(model, d2, d1)?,
        )?),
        (AutParams::Scaling(s2), AutParams::Scaling(s1)) => {
            Some(dv::scaling_automorphism(model, &s2.compose(s1)?, false)?)
        }
        (AutParams::Fm(f2), AutParams::Fm(f1)) => {
            Some(fm::fm_automorphism(model, &f2.compose(model, f1)?)?)
        }
        (AutParams::Dds(p2), AutParams::Dds(p1)) => {
            Some(dds::dds_build(model, &p2.compose(p1)?, false)?)
        }
        _ => None,
    };
    match built {
        Some(aut) => {
            if aut.images != images {
                return Err(Error::math(
                    "parameter composition disagrees with map composition",
                ));
            }
            Ok(aut)
        }
        None => Ok(Automorphism::from_parts(
            model,
            AutParams::Map,
            images,
            inverse,
        )),
    }
}

pub fn invert(model: &Model, a: &Automorphism) -> Result<Automorphism> {
    a.inverse(model)
}

pub fn apply(model: &Model, a: &Automorphism, e: &LaurentPoly) -> Result<LaurentPoly> {
    a.apply(model, e)
}

/// `Exp(f·D)` as an automorphism.
pub fn exp_automorphism(model: &Model, d: &Derivation, f: &LaurentPoly) -> Result<Automorphism> {
    let mut images = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    let neg = -f;
    for v in model.coordinates().vars() {
        let x = model.var(v.name());
        images.insert(v.clone(), exp_apply(model, d, f, &x)?);
        inverse.insert(v.clone(), exp_apply(model, d, &neg, &x)?);
    }
    Ok(Automorphism::from_parts(
        model,
        AutParams::Map,
        images,
        inverse,
    ))
}

/// Residues of the defining relations after applying `a`; all zero when `a`
/// is an endomorphism.
pub fn relation_residues(model: &Model, a: &Automorphism) -> Result<Vec<LaurentPoly>> {
    let gens = a.generator_images(model)?;
    let images: HashMap<Var, LaurentPoly> = gens.into_iter().collect();
    model
        .relations()
        .iter()
        .map(|r| Ok(model.reduce(&r.substitute(&images)?)))
        .collect()
}

/// Check that every generator image lies in the coordinate ring.
pub(crate) fn check_images_in_ring(
    model: &Model,
    images: &BTreeMap<Var, LaurentPoly>,
) -> Result<()> {
    let subst = Automorphism::substitution(images);
    for (_, g) in model.generators() {
        let img = model.reduce(&g.substitute(&subst)?);
        if !model.is_member(&img) {
            return Err(Error::math("image not in coordinate ring"));
        }
    }
    Ok(())
}
