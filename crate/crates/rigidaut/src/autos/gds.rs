//! Automorphisms of generalized Danielewski surfaces via data `(α, μ, a, b)`.
//!
//! A datum acts by `x ↦ a·x`, `y1 ↦ μ·y1 + c(x) + (a·x)^d·b(x)` where
//! `c(x) = σ_{α(i)}(a·x) − μ·σ_i(x)`; the image of `y2` is forced.

use std::collections::{BTreeMap, HashMap};

use super::{AutParams, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::{CycScalar, LaurentPoly, Monomial, Var};
use crate::models::{Model, VarietySpec};

#[derive(Clone, Debug, PartialEq)]
pub struct GdsDatum {
    /// Root permutation, `alpha[i] = α(i)` (0-based).
    pub alpha: Vec<usize>,
    pub mu: CycScalar,
    pub a: CycScalar,
    /// Polynomial in `x`.
    pub b: LaurentPoly,
}

impl GdsDatum {
    pub fn new(alpha: Vec<usize>, mu: CycScalar, a: CycScalar, b: LaurentPoly) -> Self {
        GdsDatum { alpha, mu, a, b }
    }

    pub fn identity(model: &Model) -> Self {
        let k = model.context();
        GdsDatum::new(
            (0..root_count(model)).collect(),
            k.one(),
            k.one(),
            model.zero(),
        )
    }

    pub fn alpha_is_identity(&self) -> bool {
        self.alpha.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Which `τ` to construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauKind {
    /// All `σ_i − τ` constant.
    Full,
    /// All `σ_i − τ` in `k[x^q0]`.
    Periodic(u32),
    /// The shifted roots are stable under multiplication by a primitive s-th root.
    SPeriodic(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GdsGenerator {
    U(LaurentPoly),
    H(CycScalar),
    HPeriodic(CycScalar, u32),
    S(Vec<usize>, CycScalar),
}

fn d_of(model: &Model) -> Result<u32> {
    match model.spec() {
        VarietySpec::Gds { d, .. } => Ok(*d),
        _ => Err(Error::validation("model mismatch")),
    }
}

fn p_of(model: &Model) -> &LaurentPoly {
    match model.spec() {
        VarietySpec::Gds { p, .. } => p,
        _ => unreachable!("checked by d_of"),
    }
}

fn roots_of(model: &Model) -> Option<&[LaurentPoly]> {
    match model.spec() {
        VarietySpec::Gds { roots: Some(r), .. } => Some(r),
        _ => None,
    }
}

fn root_count(model: &Model) -> usize {
    p_of(model).degree_in(&Var::new("y1")).unwrap_or(0) as usize
}

fn need_roots(model: &Model) -> Result<&[LaurentPoly]> {
    roots_of(model)
        .ok_or_else(|| Error::validation("this operation requires a standard-form surface"))
}

/// `p(a·x)`.
pub(crate) fn scale_x(p: &LaurentPoly, a: &CycScalar) -> LaurentPoly {
    let x = Var::new("x");
    p.scale_by_monomial_weight(|m| a.pow(m.exponent(&x)))
}

fn invalid(msg: &str) -> Error {
    Error::math(format!("datum invalid: {msg}"))
}

/// The common polynomial `c(x)`; errors if the datum is invalid.
pub fn gds_validate_datum(model: &Model, datum: &GdsDatum) -> Result<LaurentPoly> {
    d_of(model)?;
    let r = root_count(model);
    let mut seen = vec![false; r];
    if datum.alpha.len() != r
        || datum
            .alpha
            .iter()
            .any(|&j| j >= r || std::mem::replace(&mut seen[j], true))
    {
        return Err(Error::validation(format!(
            "datum invalid: alpha must be a permutation of {r} roots"
        )));
    }
    if datum.mu.is_zero() || datum.a.is_zero() {
        return Err(invalid("mu and a must be nonzero"));
    }
    if datum
        .b
        .terms()
        .keys()
        .any(|m| m.vars().any(|v| v.name() != "x") || m.has_negative())
    {
        return Err(Error::validation(
            "datum invalid: b must be a polynomial in x",
        ));
    }
    let c = match roots_of(model) {
        Some(roots) => {
            let ci =
                |i: usize| &scale_x(&roots[datum.alpha[i]], &datum.a) - &roots[i].scale(&datum.mu);
            let c = ci(0);
            if (1..r).any(|i| ci(i) != c) {
                return Err(invalid("c depends on i"));
            }
            c
        }
        None => {
            if !datum.alpha_is_identity() {
                return Err(Error::validation(
                    "this operation requires a standard-form surface",
                ));
            }
            model.zero()
        }
    };
    if datum.alpha_is_identity() && !datum.mu.is_one() {
        return Err(invalid("alpha = id requires mu = 1"));
    }
    Ok(c)
}

/// `c(x) + (a·x)^d·b(x)`.
fn shift_poly(model: &Model, datum: &GdsDatum, c: &LaurentPoly) -> Result<LaurentPoly> {
    let d = d_of(model)?;
    let u = datum
        .b
        .mul_monomial(&Monomial::var(&Var::new("x"), d as i64))
        .scale(&datum.a.pow(d as i64));
    Ok(c + &u)
}

fn coordinate_images(model: &Model, datum: &GdsDatum) -> Result<BTreeMap<Var, LaurentPoly>> {
    let c = gds_validate_datum(model, datum)?;
    let shift = shift_poly(model, datum, &c)?;
    let x = model.var("x").scale(&datum.a);
    let y1 = &model.var("y1").scale(&datum.mu) + &shift;
    Ok([(Var::new("x"), x), (Var::new("y1"), y1)]
        .into_iter()
        .collect())
}

/// Build the automorphism of a valid datum.
pub fn gds_automorphism(model: &Model, datum: &GdsDatum) -> Result<Automorphism> {
    let images = coordinate_images(model, datum)?;
    let d = d_of(model)? as i64;
    let p = p_of(model);
    let subst: HashMap<Var, LaurentPoly> =
        images.iter().map(|(v, q)| (v.clone(), q.clone())).collect();
    let r = root_count(model) as i64;
    let diff = &p.substitute(&subst)? - &p.scale(&datum.mu.pow(r));
    if diff.min_degree_in(&Var::new("x")).is_some_and(|v| v < d) {
        return Err(invalid("x^d does not divide the y2 correction"));
    }
    let inv = gds_inverse_datum(model, datum)?;
    let inverse_images = coordinate_images(model, &inv)?;
    Ok(Automorphism::from_parts(
        model,
        AutParams::Gds(datum.clone()),
        images,
        inverse_images,
    ))
}

/// Datum of "d1, then d2".
pub fn gds_compose_data(model: &Model, d2: &GdsDatum, d1: &GdsDatum) -> Result<GdsDatum> {
    let d = d_of(model)? as i64;
    if d1.alpha.len() != d2.alpha.len() {
        return Err(Error::validation("model mismatch"));
    }
    let alpha = d1.alpha.iter().map(|&i| d2.alpha[i]).collect();
    let b = &d1.b.scale(&(&d2.a.pow(-d) * &d2.mu)) + &scale_x(&d2.b, &d1.a);
    let out = GdsDatum::new(alpha, &d2.mu * &d1.mu, &d2.a * &d1.a, b);
    gds_validate_datum(model, &out).map_err(|e| e.context("composition of valid data"))?;
    Ok(out)
}

pub fn gds_inverse_datum(model: &Model, datum: &GdsDatum) -> Result<GdsDatum> {
    let d = d_of(model)? as i64;
    let mut alpha = vec![0; datum.alpha.len()];
    for (i, &j) in datum.alpha.iter().enumerate() {
        alpha[j] = i;
    }
    let mu_inv = datum.mu.inverse()?;
    let a_inv = datum.a.inverse()?;
    let b = scale_x(&datum.b, &a_inv).scale(&-(&datum.a.pow(d) * &mu_inv));
    Ok(GdsDatum::new(alpha, mu_inv, a_inv, b))
}

fn no_tau() -> Error {
    Error::math("no tau of requested kind")
}

/// Construct `τ(x)` of the requested kind.
pub fn gds_tau(model: &Model, kind: TauKind) -> Result<LaurentPoly> {
    d_of(model)?;
    let roots = need_roots(model)?;
    let x = Var::new("x");
    match kind {
        TauKind::Full => {
            let tau = roots[0].clone();
            if roots.iter().all(|s| (s - &tau).is_constant()) {
                Ok(tau)
            } else {
                Err(no_tau())
            }
        }
        TauKind::Periodic(q0) => {
            if q0 == 0 {
                return Err(no_tau());
            }
            let q = q0 as i64;
            let tau = LaurentPoly::from_terms(
                model.context(),
                roots[0]
                    .terms()
                    .iter()
                    .filter(|(m, _)| m.exponent(&x) % q != 0)
                    .map(|(m, c)| (m.clone(), c.clone())),
            );
            let periodic = |p: &LaurentPoly| p.terms().keys().all(|m| m.exponent(&x) % q == 0);
            if roots.iter().all(|s| periodic(&(s - &tau))) {
                Ok(tau)
            } else {
                Err(no_tau())
            }
        }
        TauKind::SPeriodic(s) => {
            let omega = model
                .context()
                .primitive_root(s as u64)
                .ok_or_else(no_tau)?;
            let tau = roots.iter().fold(model.zero(), |acc, r| &acc + r);
            let tau = tau.scale_rational(&crate::exactalg::rat(1, roots.len() as i64));
            let shifted: Vec<LaurentPoly> = roots.iter().map(|r| r - &tau).collect();
            if shifted.iter().all(|r| shifted.contains(&r.scale(&omega))) {
                Ok(tau)
            } else {
                Err(no_tau())
            }
        }
    }
}

/// Solve for `μ` making `(α, μ, a, ·)` valid, if possible.
pub fn gds_solve_mu(model: &Model, alpha: &[usize], a: &CycScalar) -> Option<CycScalar> {
    let roots = roots_of(model)?;
    let (s0, s1) = (&roots[0], &roots[1]);
    let lhs = &scale_x(&roots[*alpha.first()?], a) - &scale_x(&roots[*alpha.get(1)?], a);
    let mu = lhs.exact_div(&(s0 - s1))?.as_constant()?;
    let datum = GdsDatum::new(alpha.to_vec(), mu.clone(), a.clone(), model.zero());
    gds_validate_datum(model, &datum).ok().map(|_| mu)
}

fn precondition() -> Error {
    Error::math("preconditions on a/mu violated")
}

/// The generators `U_b`, `H_a`, `H_{a,q0}` and `S_{α,μ}`.
pub fn gds_generator(model: &Model, which: &GdsGenerator) -> Result<Automorphism> {
    let d = d_of(model)?;
    let k = model.context();
    let id: Vec<usize> = (0..root_count(model)).collect();
    let tau_shift = |tau: &LaurentPoly, a: &CycScalar| &scale_x(tau, a) - tau;
    let (datum, expected_y1, expected_y2) = match which {
        GdsGenerator::U(b) => (GdsDatum::new(id, k.one(), k.one(), b.clone()), None, None),
        GdsGenerator::H(a) => {
            if (1..d as i64).any(|q| a.pow(q).is_one()) {
                return Err(precondition());
            }
            let tau = gds_tau(model, TauKind::Full)?;
            let y1 = &model.var("y1") + &tau_shift(&tau, a);
            (
                GdsDatum::new(id, k.one(), a.clone(), model.zero()),
                Some(y1),
                Some(a.pow(-(d as i64))),
            )
        }
        GdsGenerator::HPeriodic(a, q0) => {
            let q0 = *q0 as i64;
            if q0 < 2 || q0 >= d as i64 || !a.pow(q0).is_one() || (1..q0).any(|q| a.pow(q).is_one())
            {
                return Err(precondition());
            }
            let tau = gds_tau(model, TauKind::Periodic(q0 as u32))?;
            let y1 = &model.var("y1") + &tau_shift(&tau, a);
            (
                GdsDatum::new(id, k.one(), a.clone(), model.zero()),
                Some(y1),
                Some(a.pow(-(d as i64))),
            )
        }
        GdsGenerator::S(alpha, mu) => {
            let s = mu.order().filter(|&s| s >= 2).ok_or_else(precondition)?;
            if alpha.iter().enumerate().all(|(i, &j)| i == j) {
                return Err(precondition());
            }
            let tau = gds_tau(model, TauKind::SPeriodic(s as u32))?;
            let shifted_zero = need_roots(model)?.iter().any(|r| r == &tau);
            let y1 = &model.var("y1").scale(mu) + &tau.scale(&(&k.one() - mu));
            let y2_scale = if shifted_zero { mu.clone() } else { k.one() };
            (
                GdsDatum::new(alpha.clone(), mu.clone(), k.one(), model.zero()),
                Some(y1),
                Some(y2_scale),
            )
        }
    };
    let aut = gds_automorphism(model, &datum)?;
    if let Some(y1) = expected_y1 {
        if aut.images()[&Var::new("y1")] != y1 {
            return Err(Error::math("generator image differs from its closed form"));
        }
    }
    if let Some(scale) = expected_y2 {
        let y2 = model.generator("y2").expect("gds");
        if aut.apply(model, y2)? != y2.scale(&scale) {
            return Err(Error::math("generator image differs from its closed form"));
        }
    }
    Ok(aut)
}

/// Split a datum as `S ∘ H ∘ U` (U applied first) with
/// `S = (α, μ, 1, 0)`, `H = (id, 1, a, 0)`, `U = (id, 1, 1, b')`.
pub fn gds_decompose(model: &Model, datum: &GdsDatum) -> Result<(GdsDatum, GdsDatum, GdsDatum)> {
    let d = d_of(model)? as i64;
    let k = model.context();
    let id: Vec<usize> = (0..datum.alpha.len()).collect();
    let s = GdsDatum::new(datum.alpha.clone(), datum.mu.clone(), k.one(), model.zero());
    let h = GdsDatum::new(id.clone(), k.one(), datum.a.clone(), model.zero());
    let b = datum.b.scale(&(&datum.a.pow(d) * &datum.mu.inverse()?));
    let u = GdsDatum::new(id, k.one(), k.one(), b);
    gds_validate_datum(model, &s)?;
    gds_validate_datum(model, &h)?;
    Ok((s, h, u))
}
