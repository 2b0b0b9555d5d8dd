//! Locally nilpotent derivations on a model: the canonical one per family,
//! replicas, exponentials and conjugation.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::model::{kernel_monomial, Model};
use super::spec::VarietySpec;
use crate::autos::Automorphism;
use crate::error::{Error, Result};
use crate::exactalg::{rat, LaurentPoly, Monomial, Var};

/// Default bound on derivation iterates.
pub const DEFAULT_CAP: u32 = 64;

/// A derivation given by its values on the coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    model_id: Arc<str>,
    images: BTreeMap<Var, LaurentPoly>,
}

impl Derivation {
    pub fn images(&self) -> &BTreeMap<Var, LaurentPoly> {
        &self.images
    }

    pub fn image(&self, v: &str) -> Option<&LaurentPoly> {
        self.images.get(&Var::new(v))
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub(crate) fn from_images(model: &Model, images: BTreeMap<Var, LaurentPoly>) -> Self {
        Derivation {
            model_id: Arc::from(model.id()),
            images,
        }
    }

    fn check(&self, model: &Model) -> Result<()> {
        if &*self.model_id != model.id() {
            return Err(Error::validation("model mismatch"));
        }
        Ok(())
    }
}

/// The family's canonical locally nilpotent derivation.
pub fn canonical_derivation(model: &Model) -> Derivation {
    let mut images: BTreeMap<Var, LaurentPoly> = model
        .coordinates()
        .vars()
        .map(|v| (v.clone(), model.zero()))
        .collect();
    let x_pow = |e: u32| LaurentPoly::var_pow(model.context(), "x", e as i64);
    let (coord, image) = match model.spec() {
        VarietySpec::Gds { d, .. } => ("y1", x_pow(*d)),
        VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => (
            "z",
            LaurentPoly::term(model.context().one(), kernel_monomial(k, 1)),
        ),
        VarietySpec::Fm { m, .. } => ("v", x_pow(*m)),
        VarietySpec::Dds { d1, d2, .. } => ("y1", x_pow(d1 + d2)),
    };
    images.insert(Var::new(coord), image);
    Derivation::from_images(model, images)
}

/// `D(e) = Σ_v ∂e/∂v · D(v)` over the coordinates.
pub fn derive(model: &Model, d: &Derivation, e: &LaurentPoly) -> LaurentPoly {
    let mut out = model.zero();
    for (v, img) in &d.images {
        if !img.is_zero() {
            let part = e.partial(v);
            if !part.is_zero() {
                out += &(&part * img);
            }
        }
    }
    model.reduce(&out)
}

pub fn kernel_test(model: &Model, d: &Derivation, e: &LaurentPoly) -> bool {
    derive(model, d, e).is_zero()
}

/// The replica `h·D`; `h` must lie in the kernel.
pub fn replica(model: &Model, d: &Derivation, h: &LaurentPoly) -> Result<Derivation> {
    d.check(model)?;
    if !kernel_test(model, d, h) {
        return Err(Error::math("factor not in kernel"));
    }
    let images = d
        .images
        .iter()
        .map(|(v, img)| (v.clone(), model.reduce(&(img * h))))
        .collect();
    Ok(Derivation::from_images(model, images))
}

/// Least `n` with `D^n(e) = 0`.
pub fn nilpotency_index(model: &Model, d: &Derivation, e: &LaurentPoly, cap: u32) -> Result<u32> {
    let mut cur = e.clone();
    let mut n = 0;
    while !cur.is_zero() {
        if n >= cap {
            return Err(Error::math("cap exceeded"));
        }
        cur = derive(model, d, &cur);
        n += 1;
    }
    Ok(n)
}

/// `Exp(fD)(e) = Σ f^i D^i(e) / i!`.
pub fn exp_apply(
    model: &Model,
    d: &Derivation,
    f: &LaurentPoly,
    e: &LaurentPoly,
) -> Result<LaurentPoly> {
    d.check(model)?;
    if !kernel_test(model, d, f) {
        return Err(Error::math("factor not in kernel"));
    }
    let mut acc = e.clone();
    if f.is_zero() {
        return Ok(acc);
    }
    let mut term = e.clone();
    let mut f_pow = model.one();
    for i in 1..=DEFAULT_CAP as i64 {
        term = derive(model, d, &term);
        if term.is_zero() {
            return Ok(acc);
        }
        f_pow = model.reduce(&(&f_pow * f));
        term = term.scale_rational(&rat(1, i));
        acc += &model.reduce(&(&term * &f_pow));
    }
    Err(Error::math("cap exceeded"))
}

/// `φ ∘ D ∘ φ⁻¹`, given on the coordinates.
pub fn conjugate_derivation(
    model: &Model,
    phi: &Automorphism,
    d: &Derivation,
) -> Result<Derivation> {
    d.check(model)?;
    let inv = phi.inverse(model)?;
    let mut images = BTreeMap::new();
    for v in model.coordinates().vars() {
        let pre = inv.apply(model, &model.var(v.name()))?;
        let img = phi.apply(model, &derive(model, d, &pre))?;
        images.insert(v.clone(), img);
    }
    Ok(Derivation::from_images(model, images))
}

/// The kernel element `h` with `d1 = h·d0`.
pub fn replica_factor(model: &Model, d1: &Derivation, d0: &Derivation) -> Result<LaurentPoly> {
    d1.check(model)?;
    d0.check(model)?;
    let not_replica = || Error::math("not a replica");
    let (pivot, base) = d0
        .images
        .iter()
        .find(|(_, img)| !img.is_zero())
        .ok_or_else(not_replica)?;
    let top = d1
        .images
        .get(pivot)
        .cloned()
        .unwrap_or_else(|| model.zero());
    let h = model.reduce(&top.exact_div(base).ok_or_else(not_replica)?);
    for (v, img) in &d0.images {
        let lhs = d1.images.get(v).cloned().unwrap_or_else(|| model.zero());
        if lhs != model.reduce(&(img * &h)) {
            return Err(not_replica());
        }
    }
    Ok(h)
}

/// Images of all ring generators under `d`, in presentation order.
pub fn generator_images(model: &Model, d: &Derivation) -> Vec<(Var, LaurentPoly)> {
    model
        .generators()
        .iter()
        .map(|(g, img)| (g.clone(), derive(model, d, img)))
        .collect()
}

/// The closed formulas for the canonical derivation on the non-coordinate
/// generators, computed directly from the defining data.
pub fn canonical_formulas(model: &Model) -> Vec<(Var, LaurentPoly)> {
    let k = model.context();
    let (x, y1, y2, z) = (Var::new("x"), Var::new("y1"), Var::new("y2"), Var::new("z"));
    match model.spec() {
        VarietySpec::Gds { p, .. } => vec![(y2, p.partial(&y1))],
        VarietySpec::DvCon { .. } | VarietySpec::DvGen { .. } => {
            let p = model.spec().dv_polynomial(k).expect("dv family");
            vec![(y1, p.partial(&z))]
        }
        VarietySpec::Fm { n, .. } => vec![(Var::new("u"), LaurentPoly::var_pow(k, "y", *n as i64))],
        VarietySpec::Dds { d1, d2, p1, p2 } => {
            // With y2 ↦ its image: D(y2) = x^d2 ∂P1/∂y1 and
            // D(y3) = x^d1 ∂P2/∂y1 + ∂P2/∂y2 · ∂P1/∂y1.
            let img2 = model.generator("y2").expect("dds").clone();
            let sub = [(y2.clone(), img2)].into_iter().collect();
            let dp1 = p1.partial(&y1);
            let xd = |e: u32| Monomial::var(&x, e as i64);
            let dy3 = &p2.partial(&y1).mul_monomial(&xd(*d1)) + &(&p2.partial(&y2) * &dp1);
            let dy3 = dy3.substitute(&sub).expect("polynomial substitution");
            vec![(y2, dp1.mul_monomial(&xd(*d2))), (Var::new("y3"), dy3)]
        }
    }
}
