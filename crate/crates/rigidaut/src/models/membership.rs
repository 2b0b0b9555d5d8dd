//! Deciding whether a Laurent element lies in the coordinate ring, and
//! expressing it in the generators when it does.
//!
//! GDS, Danielewski varieties and FM have a monomial basis whose images have
//! pairwise distinct leading terms with respect to a single "top" coordinate,
//! so a triangular reduction decides membership. The reduced monomials of a
//! double Danielewski surface only span, so there a bounded linear system is
//! solved by incremental echelon reduction.

use std::collections::{BTreeMap, HashMap};

use super::model::Model;
use super::spec::{kernel_names, VarietySpec};
use crate::error::{Error, Result};
use crate::exactalg::{CycScalar, LaurentPoly, Monomial, Var};

fn not_member() -> Error {
    Error::math("not a member")
}

/// A basis monomial: its name in the generators and its image.
type Basis = (Monomial, LaurentPoly);

fn ceil_div(num: i64, den: i64) -> i64 {
    (num + den - 1).div_euclid(den)
}

/// Cached powers of one generator image.
struct Powers {
    base: LaurentPoly,
    cache: Vec<LaurentPoly>,
}

impl Powers {
    fn new(base: &LaurentPoly) -> Self {
        Powers {
            cache: vec![LaurentPoly::one(base.context())],
            base: base.clone(),
        }
    }

    fn get(&mut self, l: usize) -> &LaurentPoly {
        while self.cache.len() <= l {
            let next = self.cache.last().expect("nonempty") * &self.base;
            self.cache.push(next);
        }
        &self.cache[l]
    }
}

fn check_vars(m: &Monomial, allowed: &[Var]) -> Result<()> {
    if m.vars().all(|v| allowed.contains(v)) {
        Ok(())
    } else {
        Err(not_member())
    }
}

/// Triangular reduction: repeatedly clear a term of maximal `top`-degree
/// using the basis monomial `basis(term)`, whose image carries exactly that
/// term in its top-degree part.
fn triangular(
    model: &Model,
    e: &LaurentPoly,
    top: &Var,
    mut basis: impl FnMut(&Monomial) -> Result<Basis>,
) -> Result<LaurentPoly> {
    let mut residual = model.reduce(e);
    let mut repr = model.zero();
    while let Some(deg) = residual.degree_in(top) {
        if deg < 0 {
            return Err(not_member());
        }
        let layer: Vec<(Monomial, CycScalar)> = residual
            .terms()
            .iter()
            .filter(|(m, _)| m.exponent(top) == deg)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in layer {
            let (name, image) = basis(&m)?;
            residual -= &image.scale(&c);
            repr.add_term(name, &c);
        }
        if residual.degree_in(top).is_some_and(|d| d >= deg) {
            return Err(Error::math("membership reduction did not progress"));
        }
    }
    Ok(repr)
}

pub(crate) fn represent(model: &Model, e: &LaurentPoly) -> Result<LaurentPoly> {
    let k = model.context();
    let v = Var::new;
    match model.spec() {
        VarietySpec::Gds { d, p, .. } => {
            let (d, r) = (*d as i64, p.degree_in(&v("y1")).unwrap_or(0));
            let mut y2 = Powers::new(model.generator("y2").expect("gds"));
            let allowed = [v("x"), v("y1")];
            triangular(model, e, &v("y1"), |m| {
                check_vars(m, &allowed)?;
                let (ex, ey) = (m.exponent(&v("x")), m.exponent(&v("y1")));
                let l = if ex >= 0 { 0 } else { ceil_div(-ex, d) };
                let (i, j) = (ex + d * l, ey - r * l);
                if j < 0 {
                    return Err(not_member());
                }
                let shift = Monomial::from_pairs([(v("x"), i), (v("y1"), j)]);
                let name = shift.mul(&Monomial::var(&v("y2"), l));
                Ok((name, y2.get(l as usize).mul_monomial(&shift)))
            })
        }
        VarietySpec::DvCon { k: ks, .. } | VarietySpec::DvGen { k: ks, .. } => {
            let deg = model
                .spec()
                .dv_polynomial(k)
                .and_then(|p| p.degree_in(&v("z")))
                .unwrap_or(0);
            let names: Vec<Var> = kernel_names(ks).iter().map(|n| v(n)).collect();
            let mut allowed = names.clone();
            allowed.push(v("z"));
            let mut y1 = Powers::new(model.generator("y1").expect("dv"));
            triangular(model, e, &v("z"), |m| {
                check_vars(m, &allowed)?;
                let l = names
                    .iter()
                    .zip(ks)
                    .map(|(y, &kj)| {
                        let ej = m.exponent(y);
                        if ej >= 0 {
                            0
                        } else {
                            ceil_div(-ej, kj as i64)
                        }
                    })
                    .max()
                    .unwrap_or(0);
                let b = m.exponent(&v("z")) - deg * l;
                if b < 0 {
                    return Err(not_member());
                }
                let shift = Monomial::from_pairs(
                    names
                        .iter()
                        .zip(ks)
                        .map(|(y, &kj)| (y.clone(), m.exponent(y) + l * kj as i64)),
                )
                .mul(&Monomial::var(&v("z"), b));
                let name = shift.mul(&Monomial::var(&v("y1"), l));
                Ok((name, y1.get(l as usize).mul_monomial(&shift)))
            })
        }
        VarietySpec::Fm { c, m: mm, n, .. } => {
            let (c, mm, n) = (*c as i64, *mm as i64, *n as i64);
            let mut u = Powers::new(model.generator("u").expect("fm"));
            let allowed = [v("x"), v("y"), v("z"), v("v")];
            triangular(model, e, &v("v"), |m| {
                check_vars(m, &allowed)?;
                let ex = m.exponent(&v("x"));
                let l = if ex >= 0 { 0 } else { ceil_div(-ex, mm) };
                let i = ex + mm * l;
                let j = m.exponent(&v("y")) - n * l;
                let kz = m.exponent(&v("z"));
                let w = m.exponent(&v("v")) - l;
                if j < 0 || w < 0 || !(0..c).contains(&kz) {
                    return Err(not_member());
                }
                let shift =
                    Monomial::from_pairs([(v("x"), i), (v("y"), j), (v("z"), kz), (v("v"), w)]);
                let name = shift.mul(&Monomial::var(&v("u"), l));
                Ok((name, u.get(l as usize).mul_monomial(&shift)))
            })
        }
        VarietySpec::Dds { .. } => dds_represent(model, e),
    }
}

/// Row-echelon store keyed by leading monomial; each row carries the
/// combination of candidates that produced it.
struct Echelon {
    rows: BTreeMap<Monomial, (LaurentPoly, LaurentPoly)>,
}

impl Echelon {
    fn insert(&mut self, mut vec: LaurentPoly, mut repr: LaurentPoly) {
        while let Some((lm, lc)) = vec.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match self.rows.get(&lm) {
                Some((pv, pr)) => {
                    vec -= &pv.scale(&lc);
                    repr -= &pr.scale(&lc);
                }
                None => {
                    let inv = lc.inverse().expect("nonzero leading coefficient");
                    self.rows.insert(lm, (vec.scale(&inv), repr.scale(&inv)));
                    return;
                }
            }
        }
    }

    fn solve(&self, target: &LaurentPoly) -> Option<LaurentPoly> {
        let mut vec = target.clone();
        let mut out = LaurentPoly::zero(target.context());
        while let Some((lm, lc)) = vec.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let (pv, pr) = self.rows.get(&lm)?;
            vec -= &pv.scale(&lc);
            out += &pr.scale(&lc);
        }
        Some(out)
    }
}

/// Candidates `x^i y1^j y2^l y3^t` with `(i < d1 or l = 0)` and
/// `(i < d2 or t = 0)`, bounded by degree and valuation windows around `e`.
fn dds_candidates(model: &Model, e: &LaurentPoly) -> Vec<Basis> {
    let VarietySpec::Dds { d1, d2, .. } = model.spec() else {
        unreachable!()
    };
    let (d1, d2) = (*d1 as i64, *d2 as i64);
    let (x, y1) = (Var::new("x"), Var::new("y1"));
    let img2 = model.generator("y2").expect("dds");
    let img3 = model.generator("y3").expect("dds");
    let r1 = img2.degree_in(&y1).unwrap_or(1).max(1);
    let e3 = img3.degree_in(&y1).unwrap_or(1).max(1);
    let g = e.degree_in(&y1).unwrap_or(0);
    let (lo, hi) = (
        e.min_degree_in(&x).unwrap_or(0),
        e.degree_in(&x).unwrap_or(0),
    );
    let top = g + e3;
    let lo = lo + img3.min_degree_in(&x).unwrap_or(0).min(0);
    let hi = hi + d1 + d2;
    let mut p2 = Powers::new(img2);
    let mut p3 = Powers::new(img3);
    let mut out = Vec::new();
    for t in 0..=top / e3 {
        for l in 0..=(top - t * e3) / r1 {
            let base = p2.get(l as usize) * p3.get(t as usize);
            let (bmin, bmax) = (
                base.min_degree_in(&x).unwrap_or(0),
                base.degree_in(&x).unwrap_or(0),
            );
            let i_end = match (l > 0, t > 0) {
                (false, false) => hi + 1,
                (true, false) => d1,
                (false, true) => d2,
                (true, true) => d1.min(d2),
            };
            for j in 0..=(top - t * e3 - l * r1) {
                for i in 0..i_end {
                    if i + bmin < lo || i + bmax > hi {
                        continue;
                    }
                    let shift = Monomial::from_pairs([(x.clone(), i), (y1.clone(), j)]);
                    let name = shift
                        .mul(&Monomial::var(&Var::new("y2"), l))
                        .mul(&Monomial::var(&Var::new("y3"), t));
                    out.push((name, base.mul_monomial(&shift)));
                }
            }
        }
    }
    out
}

fn dds_represent(model: &Model, e: &LaurentPoly) -> Result<LaurentPoly> {
    let allowed = [Var::new("x"), Var::new("y1")];
    for m in e.terms().keys() {
        check_vars(m, &allowed)?;
        if m.exponent(&allowed[1]) < 0 {
            return Err(not_member());
        }
    }
    if e.is_zero() {
        return Ok(model.zero());
    }
    let candidates = dds_candidates(model, e);
    // Fast path: clear leading terms with a candidate of matching leading monomial.
    let mut by_lead: HashMap<&Monomial, usize> = HashMap::new();
    for (idx, (_, img)) in candidates.iter().enumerate() {
        if let Some((lm, _)) = img.leading() {
            by_lead.entry(lm).or_insert(idx);
        }
    }
    let mut residual = e.clone();
    let mut repr = model.zero();
    for _ in 0..=4 * candidates.len() {
        let Some((lm, lc)) = residual.leading().map(|(m, c)| (m.clone(), c.clone())) else {
            return Ok(repr);
        };
        let Some(&idx) = by_lead.get(&lm) else { break };
        let (name, img) = &candidates[idx];
        let coef = &lc * &img.leading().expect("nonzero").1.inverse()?;
        residual -= &img.scale(&coef);
        repr.add_term(name.clone(), &coef);
    }
    let mut ech = Echelon {
        rows: BTreeMap::new(),
    };
    for (name, img) in candidates {
        ech.insert(img, LaurentPoly::term(model.context().one(), name));
    }
    ech.solve(e).ok_or_else(not_member)
}
