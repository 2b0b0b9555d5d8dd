//! Group-structure reports for isotropy groups, with named generators.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use super::descriptor::GroupDescriptor;
use super::families::{fm_exponent, gds_closed_form};
use crate::autos::dv::scaling_automorphism;
use crate::autos::{
    dvcon_symmetry, exp_automorphism, fm_plus, fm_star, gds_automorphism, gds_validate_datum,
    pzv_decompose, Automorphism, GdsDatum, Scaling,
};
use crate::error::{Error, Result};
use crate::exactalg::{exponent_gcd, CycScalar, LaurentPoly, Monomial, Var};
use crate::models::{canonical_derivation, kernel_names, Family, Model, VarietySpec};

pub const UNKNOWN: &str = "unknown per paper";

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub family: Family,
    /// `None` when the structure is not known.
    pub descriptor: Option<GroupDescriptor>,
    pub details: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl StructureReport {
    fn known(family: Family, descriptor: GroupDescriptor) -> Self {
        StructureReport {
            family,
            descriptor: Some(descriptor),
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn unknown(family: Family) -> Self {
        StructureReport {
            family,
            descriptor: None,
            details: BTreeMap::new(),
            notes: vec![UNKNOWN.to_string()],
        }
    }

    fn detail(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

fn nonzero(model: &Model, f: &LaurentPoly) -> Result<LaurentPoly> {
    let f = model.reduce(f);
    if f.is_zero() {
        return Err(Error::math("zero derivation"));
    }
    Ok(f)
}

fn poly_in_x(f: &LaurentPoly) -> Result<Vec<i64>> {
    let x = Var::new("x");
    if f.terms()
        .keys()
        .any(|m| m.has_negative() || m.vars().any(|v| *v != x))
    {
        return Err(Error::math("factor not in kernel"));
    }
    Ok(f.terms().keys().map(|m| m.exponent(&x)).collect())
}

// ---- GDS ------------------------------------------------------------------

/// Solutions of `a^k = r` for a list of `(k, r)` with `k ≥ 0`: `Some(G)` when
/// consistent, the solution set being the `G` roots of `a^G = ρ`.
fn solve_binomials(eqs: &[(i64, CycScalar)], one: &CycScalar) -> Result<Option<u64>> {
    let mut g = 0i64;
    let mut rho = one.clone();
    for (k, r) in eqs {
        if *k == 0 {
            continue;
        }
        let e = g.extended_gcd(k);
        let pow = |s: &CycScalar, u: i64| -> Result<CycScalar> {
            if u >= 0 {
                Ok(s.pow(u))
            } else {
                Ok(s.inverse()?.pow(-u))
            }
        };
        rho = &pow(&rho, e.x)? * &pow(r, e.y)?;
        g = e.gcd;
    }
    for (k, r) in eqs {
        let ok = if g == 0 || *k == 0 {
            *k != 0 || r.is_one()
        } else {
            &rho.pow(k / g) == r
        };
        if !ok {
            return Ok(None);
        }
    }
    Ok(Some(g as u64))
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                go(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; r], &mut out);
    out
}

struct GdsCount {
    n: u64,
    h_order: u64,
    order: u64,
}

/// Order of the stabiliser of `f·D` in `(H×S)`, summed over root permutations.
fn gds_count(model: &Model, f: &LaurentPoly) -> Result<GdsCount> {
    let (d, roots) = match model.spec() {
        VarietySpec::Gds {
            d, roots: Some(r), ..
        } => (*d as i64, r),
        VarietySpec::Gds { .. } => {
            return Err(Error::validation(
                "this operation requires a standard-form surface",
            ));
        }
        _ => return Err(Error::validation("model mismatch")),
    };
    let k = model.context();
    let constants: Vec<CycScalar> = roots.iter().map(|r| r.constant_term()).collect();
    if (0..constants.len()).any(|i| constants[..i].contains(&constants[i])) {
        // otherwise the datum set need not be closed under composition
        return Err(Error::validation(
            "structure requires roots with pairwise distinct constant terms",
        ));
    }
    let exps = poly_in_x(f)?;
    let n0 = *exps.iter().min().expect("nonzero");
    let n = exponent_gcd(&exps.iter().map(|e| d + e).collect::<Vec<_>>());
    let x = Var::new("x");
    let mut support: Vec<i64> = roots
        .iter()
        .flat_map(|r| r.terms().keys().map(|m| m.exponent(&x)))
        .collect();
    support.sort_unstable();
    support.dedup();
    let coeff = |i: usize, e: i64| roots[i].coefficient(&Monomial::var(&x, e));
    let base: Vec<(i64, CycScalar)> = exps.iter().map(|e| (e - n0, k.one())).collect();
    let mut order = 0;
    let mut h_order = 0;
    for alpha in permutations(roots.len()) {
        let identity = alpha.iter().enumerate().all(|(i, &j)| i == j);
        let mut eqs = base.clone();
        if identity {
            eqs.push((d + n0, k.one()));
        }
        let mut consistent = true;
        'roots: for i in 1..roots.len() {
            for &e in &support {
                let a = &coeff(alpha[i], e) - &coeff(alpha[0], e);
                let b = &coeff(i, e) - &coeff(0, e);
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => continue,
                    (true, false) | (false, true) => {
                        consistent = false;
                        break 'roots;
                    }
                    _ => {}
                }
                // a^e·A = a^(d+n0)·B
                let ratio = &a * &b.inverse()?;
                let exp = d + n0 - e;
                eqs.push(if exp >= 0 {
                    (exp, ratio)
                } else {
                    (-exp, ratio.inverse()?)
                });
            }
        }
        if !consistent {
            continue;
        }
        let Some(g) = solve_binomials(&eqs, &k.one())? else {
            continue;
        };
        if g == 0 {
            return Err(Error::math("isotropy group is not finite"));
        }
        if identity {
            h_order = g;
        }
        order += g;
    }
    Ok(GdsCount { n, h_order, order })
}

pub fn gds_structure(model: &Model, f: &LaurentPoly) -> Result<StructureReport> {
    let f = nonzero(model, f)?;
    let c = gds_count(model, &f)?;
    let d = match model.spec() {
        VarietySpec::Gds { d, .. } => *d as u64,
        _ => unreachable!("checked by gds_count"),
    };
    let desc = GroupDescriptor::semidirect(
        GroupDescriptor::Unipotent("k[x]".into()),
        GroupDescriptor::Cyclic(c.order),
    );
    let kind = match c.h_order {
        1 => "none".to_string(),
        h if h >= d => "H_a".to_string(),
        h => format!("H_{{a,{h}}}"),
    };
    let mut report = StructureReport::known(Family::Gds, desc.simplify())
        .detail("n", json!(c.n))
        .detail("h_order", json!(c.h_order))
        .detail("order", json!(c.order))
        .detail("generator_kind", json!(kind));
    if c.order > 1 && model.context().primitive_root(c.order).is_none() {
        report.notes.push(format!("requires ζ_{} ∈ field", c.order));
    }
    Ok(report)
}

fn root(model: &Model, q: u64) -> Result<CycScalar> {
    model
        .context()
        .primitive_root(q)
        .ok_or_else(|| Error::math(format!("field lacks a primitive {q}-th root of unity")))
}

fn gds_generators(model: &Model, f: &LaurentPoly) -> Result<Vec<(String, Automorphism)>> {
    let f = nonzero(model, f)?;
    let c = gds_count(model, &f)?;
    let k = model.context();
    let id = GdsDatum::identity(model);
    let mut out = vec![(
        "U_1".to_string(),
        gds_automorphism(
            model,
            &GdsDatum::new(id.alpha.clone(), k.one(), k.one(), model.one()),
        )?,
    )];
    let d = match model.spec() {
        VarietySpec::Gds { d, .. } => *d as i64,
        _ => unreachable!(),
    };
    let n0 = *poly_in_x(&f)?.iter().min().expect("nonzero");
    if c.h_order > 1 {
        let a = root(model, c.h_order)?;
        let datum = GdsDatum::new(id.alpha.clone(), k.one(), a, model.zero());
        out.push((
            format!("H (order {})", c.h_order),
            gds_automorphism(model, &datum)?,
        ));
    }
    if c.order > c.h_order {
        let a = root(model, c.order)?;
        let mu = a.pow(d + n0);
        let found = permutations(id.alpha.len()).into_iter().find_map(|alpha| {
            let datum = GdsDatum::new(alpha, mu.clone(), a.clone(), model.zero());
            let ok = gds_validate_datum(model, &datum).is_ok()
                && gds_closed_form(model, &datum, &f).ok()?;
            ok.then_some(datum)
        });
        let datum = found.ok_or_else(|| Error::math("no datum generates the isotropy group"))?;
        out.push((
            format!("(H x S) generator (order {})", c.order),
            gds_automorphism(model, &datum)?,
        ));
    }
    Ok(out)
}

// ---- DVCon ----------------------------------------------------------------

fn dv_k(model: &Model) -> Result<&[u32]> {
    match model.spec() {
        VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => Ok(k),
        _ => Err(Error::validation("model mismatch")),
    }
}

/// Sizes of the blocks of equal exponents, in order of first appearance.
fn blocks(k: &[u32]) -> Vec<Vec<usize>> {
    let mut out: Vec<(u32, Vec<usize>)> = Vec::new();
    for (j, &kj) in k.iter().enumerate() {
        match out.iter_mut().find(|(v, _)| *v == kj) {
            Some((_, b)) => b.push(j),
            None => out.push((kj, vec![j])),
        }
    }
    out.into_iter().map(|(_, b)| b).collect()
}

fn dv_kernel_name(model: &Model) -> Result<String> {
    Ok(format!("K[{}]", kernel_names(dv_k(model)?).join(",")))
}

pub fn dvcon_structure(model: &Model, h: &LaurentPoly) -> Result<StructureReport> {
    let h = nonzero(model, h)?;
    let k = dv_k(model)?;
    if model.family() != Family::DvCon {
        return Err(Error::validation("model mismatch"));
    }
    if !h.is_constant() {
        return Ok(StructureReport::unknown(Family::DvCon));
    }
    let p = model
        .spec()
        .dv_polynomial(model.context())
        .expect("dv family");
    let pzv = pzv_decompose(&p)?;
    let s = exponent_gcd(&k.iter().map(|&e| e as i64).collect::<Vec<_>>());
    let perm = GroupDescriptor::Perm(blocks(k).iter().map(|b| b.len() as u32).collect());
    let unipotent = GroupDescriptor::Unipotent(dv_kernel_name(model)?);
    let rank = k.len() as u32;
    let torus = if pzv.pure_power {
        GroupDescriptor::Torus(rank)
    } else {
        GroupDescriptor::direct(
            GroupDescriptor::Torus(rank - 1),
            GroupDescriptor::Cyclic(s * pzv.v as u64),
        )
    };
    let desc = GroupDescriptor::semidirect(GroupDescriptor::semidirect(unipotent, torus), perm);
    Ok(StructureReport::known(Family::DvCon, desc.simplify())
        .detail("s", json!(s))
        .detail("u", json!(pzv.u))
        .detail("v", json!(pzv.v))
        .detail("pure_power", json!(pzv.pure_power)))
}

/// Integers `c` with `Σ c_j k_j = gcd(k)`.
fn bezout(k: &[u32]) -> Vec<i64> {
    let mut g = 0i64;
    let mut c: Vec<i64> = Vec::with_capacity(k.len());
    for &kj in k {
        let e = g.extended_gcd(&(kj as i64));
        for cj in c.iter_mut() {
            *cj *= e.x;
        }
        c.push(e.y);
        g = e.gcd;
    }
    c
}

fn dvcon_generators(model: &Model, h: &LaurentPoly) -> Result<Vec<(String, Automorphism)>> {
    let report = dvcon_structure(model, h)?;
    if report.descriptor.is_none() {
        return Err(Error::math(UNKNOWN));
    }
    let k = dv_k(model)?;
    let names = kernel_names(k);
    let ctx = model.context();
    let mut out = Vec::new();
    for block in blocks(k) {
        for w in block.windows(2) {
            let mut sigma: Vec<usize> = (0..k.len()).collect();
            sigma.swap(w[0], w[1]);
            out.push((
                format!("swap {} {}", names[w[0]], names[w[1]]),
                dvcon_symmetry(model, &sigma)?,
            ));
        }
    }
    let zeta = ctx.zeta();
    let scaled = |t: Vec<CycScalar>, tz: CycScalar| {
        scaling_automorphism(
            model,
            &Scaling {
                sigma: (0..k.len()).collect(),
                t,
                tz,
            },
            true,
        )
    };
    if report.details["pure_power"] == json!(true) {
        for j in 0..k.len() {
            let mut t = vec![ctx.one(); k.len()];
            t[j] = zeta.clone();
            out.push((
                format!("torus {}", names[j]),
                scaled(t, zeta.pow(k[j] as i64))?,
            ));
        }
    } else {
        for j in 1..k.len() {
            let mut t = vec![ctx.one(); k.len()];
            t[0] = zeta.pow(k[j] as i64);
            t[j] = zeta.pow(-(k[0] as i64));
            out.push((
                format!("torus {}/{}", names[0], names[j]),
                scaled(t, ctx.one())?,
            ));
        }
        let s = report.details["s"].as_u64().expect("set above");
        let order = s * report.details["v"].as_u64().expect("set above");
        if order > 1 {
            let omega = root(model, order)?;
            let t = bezout(k).iter().map(|&c| omega.pow(c)).collect();
            out.push((
                format!("cyclic (order {order})"),
                scaled(t, omega.pow(s as i64))?,
            ));
        }
    }
    let y = model.var(&names[0]);
    out.push((
        format!("Exp({}·D)", names[0]),
        exp_automorphism(model, &canonical_derivation(model), &y)?,
    ));
    Ok(out)
}

// ---- FM -------------------------------------------------------------------

fn fm_gcd(model: &Model, h: &LaurentPoly) -> Result<u64> {
    let h = nonzero(model, h)?;
    let allowed = ["x", "y", "z"];
    if h.terms()
        .keys()
        .any(|m| m.has_negative() || m.vars().any(|v| !allowed.contains(&v.name())))
    {
        return Err(Error::math("h not in kernel"));
    }
    let es = h
        .terms()
        .keys()
        .map(|m| fm_exponent(model, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(exponent_gcd(&es))
}

pub fn fm_structure(model: &Model, h: &LaurentPoly) -> Result<StructureReport> {
    if model.family() != Family::Fm {
        return Err(Error::validation("model mismatch"));
    }
    let g = fm_gcd(model, h)?;
    let desc = GroupDescriptor::semidirect(
        GroupDescriptor::Unipotent("R".into()),
        GroupDescriptor::Cyclic(g),
    );
    let mut report = StructureReport::known(Family::Fm, desc.simplify()).detail("g", json!(g));
    if g > 1 && model.context().primitive_root(g).is_none() {
        report.notes.push(format!("requires ζ_{g} ∈ field"));
    }
    Ok(report)
}

fn fm_generators(model: &Model, h: &LaurentPoly) -> Result<Vec<(String, Automorphism)>> {
    let g = fm_gcd(model, h)?;
    let mut out = vec![("θ_1^+".to_string(), fm_plus(model, &model.one())?)];
    if g > 1 {
        out.push((
            format!("θ_μ^* (order {g})"),
            fm_star(model, &root(model, g)?)?,
        ));
    }
    Ok(out)
}

// ---- DDS ------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaCase {
    /// `f(0) ≠ 0`: gcd of the nonzero exponents.
    P,
    /// `f(0) = 0`: gcd of consecutive exponent gaps.
    Q,
}

/// The case and gcd bounding the order of `λ` for elements of `Aut(f·D)`.
pub fn dds_lambda_order(model: &Model, f: &LaurentPoly) -> Result<(LambdaCase, u64)> {
    if model.family() != Family::Dds {
        return Err(Error::validation("model mismatch"));
    }
    let f = nonzero(model, f)?;
    let mut exps = poly_in_x(&f)?;
    exps.sort_unstable();
    if exps[0] == 0 {
        Ok((LambdaCase::P, exponent_gcd(&exps[1..])))
    } else {
        let gaps: Vec<i64> = exps.windows(2).map(|w| w[1] - w[0]).collect();
        Ok((LambdaCase::Q, exponent_gcd(&gaps)))
    }
}

// ---- dispatch -------------------------------------------------------------

/// Structure of `Aut(factor·D)` for the model's canonical `D`.
pub fn structure(model: &Model, factor: &LaurentPoly) -> Result<StructureReport> {
    match model.family() {
        Family::Gds => gds_structure(model, factor),
        Family::DvCon => dvcon_structure(model, factor),
        Family::DvGen => {
            nonzero(model, factor)?;
            Ok(StructureReport::unknown(Family::DvGen))
        }
        Family::Fm => fm_structure(model, factor),
        Family::Dds => {
            let (case, order) = dds_lambda_order(model, factor)?;
            Ok(StructureReport::unknown(Family::Dds)
                .detail("lambda_case", json!(case))
                .detail("lambda_gcd", json!(order)))
        }
    }
}

/// Named automorphisms generating the group reported by [`structure`]
/// (topologically, for the unipotent and torus parts).
pub fn structure_generators(
    model: &Model,
    factor: &LaurentPoly,
) -> Result<Vec<(String, Automorphism)>> {
    match model.family() {
        Family::Gds => gds_generators(model, factor),
        Family::DvCon => dvcon_generators(model, factor),
        Family::Fm => fm_generators(model, factor),
        Family::DvGen | Family::Dds => Err(Error::math(UNKNOWN)),
    }
}
