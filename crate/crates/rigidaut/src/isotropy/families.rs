//! Closed-form membership criteria, run alongside the oracle.

use super::{oracle, require, IsotropyVerdict};
use crate::autos::dds::{dds_automorphism, dds_localized};
use crate::autos::fm::{fm_data, fm_star};
use crate::autos::gds::{gds_automorphism, GdsDatum};
use crate::autos::{AutParams, Automorphism, Scaling};
use crate::error::{Error, Result};
use crate::exactalg::{CycScalar, LaurentPoly, Monomial, Var};
use crate::models::{canonical_derivation, replica, Family, Model, VarietySpec};

/// Note attached to FM verdicts where a published remark is contradicted.
pub const FM_REMARK_ERRATUM: &str =
    "published remark claims only mu = 1 preserves (x + x^2)D; the exponent criterion and the oracle both accept this mu";

fn x_exponents(f: &LaurentPoly) -> Vec<i64> {
    let x = Var::new("x");
    f.terms().keys().map(|m| m.exponent(&x)).collect()
}

fn is_poly_in(f: &LaurentPoly, vars: &[&str]) -> bool {
    f.terms()
        .keys()
        .all(|m| !m.has_negative() && m.vars().all(|v| vars.contains(&v.name())))
}

/// Check `f` is a nonzero kernel element over `vars`.
fn kernel_factor(model: &Model, f: &LaurentPoly, vars: &[&str], msg: &str) -> Result<LaurentPoly> {
    let f = model.reduce(f);
    if f.is_zero() {
        return Err(Error::math("zero derivation"));
    }
    if !is_poly_in(&f, vars) {
        return Err(Error::math(msg));
    }
    Ok(f)
}

fn kernel_vars(model: &Model) -> Vec<&str> {
    model
        .kernel_coordinates()
        .iter()
        .map(|v| v.name())
        .collect()
}

fn verdict(
    model: &Model,
    theta: &Automorphism,
    h: &LaurentPoly,
    closed: Option<bool>,
) -> Result<IsotropyVerdict> {
    let d = replica(model, &canonical_derivation(model), h)?;
    Ok(IsotropyVerdict::new(closed, oracle(model, theta, &d)?))
}

fn gds_d(model: &Model) -> Result<i64> {
    match model.spec() {
        VarietySpec::Gds { d, .. } => Ok(*d as i64),
        _ => Err(Error::validation("model mismatch")),
    }
}

/// `μ = a^(d+n_i)` for every exponent `n_i` in the support of `f`.
pub fn gds_closed_form(model: &Model, datum: &GdsDatum, f: &LaurentPoly) -> Result<bool> {
    let d = gds_d(model)?;
    Ok(x_exponents(f)
        .iter()
        .all(|&n| datum.a.pow(d + n) == datum.mu))
}

pub fn gds_membership(model: &Model, datum: &GdsDatum, f: &LaurentPoly) -> Result<IsotropyVerdict> {
    require(model, Family::Gds)?;
    let f = kernel_factor(model, f, &["x"], "factor not in kernel")?;
    let theta = gds_automorphism(model, datum)?;
    verdict(model, &theta, &f, Some(gds_closed_form(model, datum, &f)?))
}

fn dv_k(model: &Model) -> &[u32] {
    match model.spec() {
        VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => k,
        _ => &[],
    }
}

/// `∏ t_j^k_j`.
fn weight(s: &Scaling, k: &[u32]) -> CycScalar {
    s.t.iter()
        .zip(k)
        .fold(s.tz.context().one(), |acc, (t, &kj)| {
            &acc * &t.pow(kj as i64)
        })
}

fn scaling_of(theta: &Automorphism) -> Result<&Scaling> {
    match theta.params() {
        AutParams::Scaling(s) => Ok(s),
        _ => Err(Error::validation(
            "expected a permutation-scaling automorphism",
        )),
    }
}

/// `tz·h = θ(h)·∏ t_j^k_j`.
pub fn dvgen_closed_form(model: &Model, theta: &Automorphism, h: &LaurentPoly) -> Result<bool> {
    let s = scaling_of(theta)?;
    let lhs = h.scale(&s.tz);
    let rhs = theta.apply(model, h)?.scale(&weight(s, dv_k(model)));
    Ok(lhs == rhs)
}

/// The torus, symmetry and quasitorus criteria; `None` for a mixed element
/// with a quasitorus part and nonconstant `h`.
pub fn dvcon_closed_form(
    model: &Model,
    theta: &Automorphism,
    h: &LaurentPoly,
) -> Result<Option<bool>> {
    let s = scaling_of(theta)?;
    let k = dv_k(model);
    if h.is_constant() {
        return Ok(Some(s.tz == weight(s, k)));
    }
    if s.tz.is_one() {
        // torus, symmetry and their products: θ(h) = λ1·h
        let moved = theta.apply(model, h)?;
        return Ok(Some(moved == h.scale(&s.y1_factor(k))));
    }
    if s.is_pure_scaling() && s.t.iter().all(|t| t.is_one()) {
        return Ok(Some(false));
    }
    Ok(None)
}

fn dv_membership(
    model: &Model,
    family: Family,
    theta: &Automorphism,
    h: &LaurentPoly,
) -> Result<IsotropyVerdict> {
    require(model, family)?;
    let h = kernel_factor(model, h, &kernel_vars(model), "h not in kernel")?;
    theta.check(model)?;
    let closed = match family {
        Family::DvCon => dvcon_closed_form(model, theta, &h)?,
        _ => Some(dvgen_closed_form(model, theta, &h)?),
    };
    verdict(model, theta, &h, closed)
}

pub fn dvcon_membership(
    model: &Model,
    theta: &Automorphism,
    h: &LaurentPoly,
) -> Result<IsotropyVerdict> {
    dv_membership(model, Family::DvCon, theta, h)
}

pub fn dvgen_membership(
    model: &Model,
    theta: &Automorphism,
    h: &LaurentPoly,
) -> Result<IsotropyVerdict> {
    dv_membership(model, Family::DvGen, theta, h)
}

/// `bc(m+r) + ac(n+s) + ab·t` for the monomial `x^r y^s z^t`.
pub fn fm_exponent(model: &Model, mono: &Monomial) -> Result<i64> {
    let (a, b, c, m, n) = fm_data(model)?;
    let e = |v: &str| mono.exponent(&Var::new(v));
    Ok(b * c * (m + e("x")) + a * c * (n + e("y")) + a * b * e("z"))
}

/// `μ^e = 1` for the exponent of every support monomial of `h`.
pub fn fm_closed_form(model: &Model, mu: &CycScalar, h: &LaurentPoly) -> Result<bool> {
    for mono in model.reduce(h).terms().keys() {
        if !mu.pow(fm_exponent(model, mono)?).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The erratum note, when `h` has support `{x, x^2}`, `μ ≠ 1` and `θ_μ^*`
/// preserves `h·D`.
pub fn fm_erratum(
    model: &Model,
    mu: &CycScalar,
    h: &LaurentPoly,
    closed: bool,
) -> Option<&'static str> {
    let h = model.reduce(h);
    let x = Var::new("x");
    let support: Vec<&Monomial> = h.terms().keys().collect();
    let flagged = support.len() == 2
        && support.contains(&&Monomial::var(&x, 1))
        && support.contains(&&Monomial::var(&x, 2))
        && !mu.is_one()
        && closed;
    flagged.then_some(FM_REMARK_ERRATUM)
}

fn with_erratum(
    model: &Model,
    mu: &CycScalar,
    h: &LaurentPoly,
    mut v: IsotropyVerdict,
) -> IsotropyVerdict {
    if let Some(note) = fm_erratum(model, mu, h, v.closed_form == Some(true)) {
        v.discrepancy = true;
        v.erratum = Some(note.to_string());
    }
    v
}

pub fn fm_membership(model: &Model, mu: &CycScalar, h: &LaurentPoly) -> Result<IsotropyVerdict> {
    require(model, Family::Fm)?;
    let h = kernel_factor(model, h, &["x", "y", "z"], "h not in kernel")?;
    let theta = fm_star(model, mu)?;
    let v = verdict(model, &theta, &h, Some(fm_closed_form(model, mu, &h)?))?;
    Ok(with_erratum(model, mu, &h, v))
}

fn dds_weight(model: &Model) -> Result<i64> {
    match model.spec() {
        VarietySpec::Dds { d1, d2, .. } => Ok((d1 + d2) as i64),
        _ => Err(Error::validation("model mismatch")),
    }
}

/// `a = λ^(d1+d2+n_i)` for every exponent in the support of `f`.
pub fn dds_closed_form(
    model: &Model,
    lambda: &CycScalar,
    a: &CycScalar,
    f: &LaurentPoly,
) -> Result<bool> {
    let w = dds_weight(model)?;
    Ok(x_exponents(f).iter().all(|&n| &lambda.pow(w + n) == a))
}

/// Uses the localized map when the translation `b` leaves the ring.
pub fn dds_membership(
    model: &Model,
    lambda: &CycScalar,
    a: &CycScalar,
    b: &LaurentPoly,
    f: &LaurentPoly,
) -> Result<IsotropyVerdict> {
    require(model, Family::Dds)?;
    let f = kernel_factor(model, f, &["x"], "factor not in kernel")?;
    let theta = match dds_automorphism(model, lambda, a, b) {
        Ok(t) => t,
        Err(e) if e.message == "image not in coordinate ring" => {
            dds_localized(model, lambda, a, b)?
        }
        Err(e) => return Err(e),
    };
    verdict(
        model,
        &theta,
        &f,
        Some(dds_closed_form(model, lambda, a, &f)?),
    )
}

/// Membership of any automorphism in `Aut(factor·D)`, with the family's
/// closed form where one applies.
pub fn membership(
    model: &Model,
    theta: &Automorphism,
    factor: &LaurentPoly,
) -> Result<IsotropyVerdict> {
    theta.check(model)?;
    let family = model.family();
    let kernel: Vec<&str> = match family {
        Family::Gds | Family::Dds => vec!["x"],
        Family::Fm => vec!["x", "y", "z"],
        Family::DvCon | Family::DvGen => kernel_vars(model),
    };
    let msg = match family {
        Family::Gds | Family::Dds => "factor not in kernel",
        _ => "h not in kernel",
    };
    let h = kernel_factor(model, factor, &kernel, msg)?;
    let closed = match (theta.params(), family) {
        (AutParams::Gds(datum), Family::Gds) => Some(gds_closed_form(model, datum, &h)?),
        (AutParams::Scaling(_), Family::DvCon) => dvcon_closed_form(model, theta, &h)?,
        (AutParams::Scaling(_), Family::DvGen) => Some(dvgen_closed_form(model, theta, &h)?),
        (AutParams::Fm(p), Family::Fm) => Some(fm_closed_form(model, &p.mu, &h)?),
        (AutParams::Dds(p), Family::Dds) => Some(dds_closed_form(model, &p.lambda, &p.a, &h)?),
        _ if theta.is_identity() => Some(true),
        _ => None,
    };
    let v = verdict(model, theta, &h, closed)?;
    Ok(match theta.params() {
        AutParams::Fm(p) => with_erratum(model, &p.mu, &h, v),
        _ => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{cyclotomic_context, parse_poly, FieldContext, Roster};
    use crate::models::build_model;

    fn gds(k: &FieldContext, d: u32, roots: &[&str]) -> Model {
        let roots = roots
            .iter()
            .map(|s| parse_poly(s, &Roster::plain(&["x"]), k).unwrap())
            .collect();
        build_model(VarietySpec::gds_standard(k, d, roots).unwrap(), k).unwrap()
    }

    #[test]
    fn gds_h_part() {
        let k = cyclotomic_context(12).unwrap();
        let m = gds(&k, 2, &["0", "1"]);
        let h = |a: CycScalar| GdsDatum::new(vec![0, 1], k.one(), a, m.zero());
        let v = gds_membership(&m, &h(k.from_int(-1)), &m.one()).unwrap();
        assert_eq!((v.closed_form, v.oracle), (Some(true), true));
        let f = m.parse_element("x + x^2").unwrap();
        let v = gds_membership(&m, &h(k.from_int(-1)), &f).unwrap();
        assert_eq!((v.closed_form, v.oracle), (Some(false), false));
        assert!(v.witness.is_some());
        assert_eq!(
            gds_membership(&m, &h(k.one()), &m.zero())
                .unwrap_err()
                .message,
            "zero derivation"
        );
    }

    #[test]
    fn fm_erratum_flagged() {
        let k = cyclotomic_context(70).unwrap();
        let m = build_model(VarietySpec::fm(3, 4, 5, 2, 2).unwrap(), &k).unwrap();
        let mu = k.primitive_root(10).unwrap();
        let v = fm_membership(&m, &mu, &m.parse_element("x + x^2").unwrap()).unwrap();
        assert_eq!(
            (v.closed_form, v.oracle, v.discrepancy),
            (Some(true), true, true)
        );
        assert!(v.erratum.is_some());
        let v = fm_membership(&m, &k.zeta(), &m.one()).unwrap();
        assert_eq!(
            (v.closed_form, v.oracle, v.discrepancy),
            (Some(true), true, false)
        );
    }

    #[test]
    fn dds_translation_irrelevant() {
        let k = cyclotomic_context(12).unwrap();
        let p1 = LaurentPoly::var_pow(&k, "y1", 2);
        let p2 = LaurentPoly::var_pow(&k, "y2", 2);
        let m = build_model(VarietySpec::dds(2, 2, p1, p2).unwrap(), &k).unwrap();
        let lam = k.primitive_root(4).unwrap();
        for b in [m.zero(), m.var("x")] {
            let v = dds_membership(&m, &lam, &k.one(), &b, &m.one()).unwrap();
            assert_eq!((v.closed_form, v.oracle), (Some(true), true));
        }
    }
}
