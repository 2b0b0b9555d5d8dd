//! Permutation–scaling automorphisms of Danielewski varieties.

use std::collections::{BTreeMap, HashMap};

use super::{AutParams, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::{exponent_gcd, CycScalar, LaurentPoly, Var};
use crate::models::{kernel_monomial, kernel_names, Family, Model, VarietySpec};

/// `y_j ↦ t_j·y_{σ(j)}` on `y2..ym`, `z ↦ tz·z`; indices are 0-based over
/// `y2..ym`. The image of `y1` is forced.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaling {
    pub sigma: Vec<usize>,
    pub t: Vec<CycScalar>,
    pub tz: CycScalar,
}

impl Scaling {
    pub fn identity(model: &Model) -> Self {
        let n = exponents(model).len();
        let k = model.context();
        Scaling {
            sigma: (0..n).collect(),
            t: vec![k.one(); n],
            tz: k.one(),
        }
    }

    /// "first, then self" on the variety.
    pub fn compose(&self, first: &Scaling) -> Result<Scaling> {
        if self.sigma.len() != first.sigma.len() {
            return Err(Error::validation("model mismatch"));
        }
        let sigma = self.sigma.iter().map(|&j| first.sigma[j]).collect();
        let t = self
            .t
            .iter()
            .zip(&self.sigma)
            .map(|(tj, &s)| tj * &first.t[s])
            .collect();
        Ok(Scaling {
            sigma,
            t,
            tz: &self.tz * &first.tz,
        })
    }

    pub fn inverse(&self) -> Result<Scaling> {
        let n = self.sigma.len();
        let mut sigma = vec![0; n];
        let mut t = vec![self.tz.context().one(); n];
        for (j, &s) in self.sigma.iter().enumerate() {
            sigma[s] = j;
            t[s] = self.t[j].inverse()?;
        }
        Ok(Scaling {
            sigma,
            t,
            tz: self.tz.inverse()?,
        })
    }

    /// Whether σ is the identity.
    pub fn is_pure_scaling(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The scalar λ1 = ∏ t_j^(−k_j) by which the torus part rescales `y1`.
    pub fn y1_factor(&self, k: &[u32]) -> CycScalar {
        self.t
            .iter()
            .zip(k)
            .fold(self.tz.context().one(), |acc, (tj, &kj)| {
                &acc * &tj.pow(-(kj as i64))
            })
    }
}

fn exponents(model: &Model) -> &[u32] {
    match model.spec() {
        VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => k,
        _ => &[],
    }
}

fn check_dv(model: &Model) -> Result<&[u32]> {
    match model.family() {
        Family::DvCon | Family::DvGen => Ok(exponents(model)),
        _ => Err(Error::validation("model mismatch")),
    }
}

fn images_of(model: &Model, s: &Scaling) -> BTreeMap<Var, LaurentPoly> {
    let names = kernel_names(exponents(model));
    let mut out: BTreeMap<Var, LaurentPoly> = names
        .iter()
        .enumerate()
        .map(|(j, n)| (Var::new(n), model.var(&names[s.sigma[j]]).scale(&s.t[j])))
        .collect();
    out.insert(Var::new("z"), model.var("z").scale(&s.tz));
    out
}

fn check_shape(model: &Model, s: &Scaling) -> Result<()> {
    let k = check_dv(model)?;
    let n = k.len();
    let mut seen = vec![false; n];
    if s.sigma.len() != n
        || s.t.len() != n
        || s.sigma
            .iter()
            .any(|&j| j >= n || std::mem::replace(&mut seen[j], true))
    {
        return Err(Error::validation("permutation invalid"));
    }
    if s.sigma.iter().enumerate().any(|(j, &sj)| k[sj] != k[j]) {
        return Err(Error::math("permutation does not stabilize the monomial"));
    }
    if s.tz.is_zero() || s.t.iter().any(|t| t.is_zero()) {
        return Err(Error::math("scalars must be nonzero"));
    }
    Ok(())
}

/// Index `i` of the first coefficient `s_i` violating the divisibility
/// `∏ y_j^k_j | s_i(t·y_σ) − tz^(d−i)·s_i(y)`, if any.
pub fn condition_one_failure(model: &Model, s: &Scaling) -> Result<Option<usize>> {
    check_shape(model, s)?;
    let k = exponents(model);
    let p = model
        .spec()
        .dv_polynomial(model.context())
        .expect("dv family");
    let z = Var::new("z");
    let d = p.degree_in(&z).unwrap_or(0);
    let subst: HashMap<Var, LaurentPoly> = images_of(model, s).into_iter().collect();
    let divisor = kernel_monomial(k, -1);
    for i in 0..d.max(0) {
        let si = p.coeff_in(&z, i);
        let moved = si.substitute(&subst)?;
        let diff = &moved - &si.scale(&s.tz.pow(d - i));
        if !diff.mul_monomial(&divisor).is_polynomial() {
            return Ok(Some(i as usize));
        }
    }
    Ok(None)
}

/// Build from scaling data; `check` enforces condition (1).
pub(crate) fn scaling_automorphism(
    model: &Model,
    s: &Scaling,
    check: bool,
) -> Result<Automorphism> {
    check_shape(model, s)?;
    if check {
        if let Some(i) = condition_one_failure(model, s)? {
            return Err(Error::math(format!("condition (1) fails at i={i}")));
        }
    }
    let inv = s.inverse()?;
    Ok(Automorphism::from_parts(
        model,
        AutParams::Scaling(s.clone()),
        images_of(model, s),
        images_of(model, &inv),
    ))
}

fn require(model: &Model, family: Family) -> Result<()> {
    if model.family() != family {
        return Err(Error::validation("model mismatch"));
    }
    Ok(())
}

/// Proper torus element `y_j ↦ λ_j·y_j`.
pub fn dvcon_torus(model: &Model, lambda: &[CycScalar]) -> Result<Automorphism> {
    require(model, Family::DvCon)?;
    let mut s = Scaling::identity(model);
    if lambda.len() != s.t.len() {
        return Err(Error::validation(format!(
            "expected {} torus scalars",
            s.t.len()
        )));
    }
    s.t = lambda.to_vec();
    scaling_automorphism(model, &s, true)
}

/// Permutation of `y2..ym` preserving the exponents; `sigma[j]` is the
/// 0-based image of `y_{j+2}`.
pub fn dvcon_symmetry(model: &Model, sigma: &[usize]) -> Result<Automorphism> {
    require(model, Family::DvCon)?;
    let mut s = Scaling::identity(model);
    s.sigma = sigma.to_vec();
    scaling_automorphism(model, &s, true)
}

/// `z ↦ t·z`; requires `t^v = 1` unless `P = z^d`.
pub fn dvcon_quasitorus(model: &Model, t: &CycScalar) -> Result<Automorphism> {
    require(model, Family::DvCon)?;
    let VarietySpec::DvCon { p, .. } = model.spec() else {
        unreachable!()
    };
    let pzv = pzv_decompose(p)?;
    if t.is_zero() {
        return Err(Error::math("scalars must be nonzero"));
    }
    if !pzv.pure_power && !t.pow(pzv.v as i64).is_one() {
        return Err(Error::math("t^v ≠ 1"));
    }
    let mut s = Scaling::identity(model);
    s.tz = t.clone();
    scaling_automorphism(model, &s, true)
}

/// Element of the canonical group of a general Danielewski variety.
pub fn dvgen_element(
    model: &Model,
    sigma: &[usize],
    t: &[CycScalar],
    tz: &CycScalar,
) -> Result<Automorphism> {
    require(model, Family::DvGen)?;
    let s = Scaling {
        sigma: sigma.to_vec(),
        t: t.to_vec(),
        tz: tz.clone(),
    };
    scaling_automorphism(model, &s, true)
}

/// `P(z) = z^u·Q(z^v)` with `v` maximal.
#[derive(Clone, Debug, PartialEq)]
pub struct PzvDecomposition {
    pub u: u32,
    /// 0 when `P` is a pure power.
    pub v: u32,
    /// `Q(t)` written in the variable `t`.
    pub q: LaurentPoly,
    pub pure_power: bool,
}

pub fn pzv_decompose(p: &LaurentPoly) -> Result<PzvDecomposition> {
    let z = Var::new("z");
    if p.is_zero() || p.terms().keys().any(|m| m.vars().any(|v| *v != z)) {
        return Err(Error::validation("P must be a nonzero polynomial in z"));
    }
    let u = p.min_degree_in(&z).unwrap_or(0);
    let shifted: Vec<i64> = p.terms().keys().map(|m| m.exponent(&z) - u).collect();
    let v = exponent_gcd(&shifted) as i64;
    let q = LaurentPoly::from_terms(
        p.context(),
        p.terms().iter().map(|(m, c)| {
            let e = if v == 0 { 0 } else { (m.exponent(&z) - u) / v };
            (crate::exactalg::Monomial::var(&Var::new("t"), e), c.clone())
        }),
    );
    Ok(PzvDecomposition {
        u: u as u32,
        v: v as u32,
        q,
        pure_power: v == 0,
    })
}
