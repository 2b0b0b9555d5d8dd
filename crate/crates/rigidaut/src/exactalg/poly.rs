//! Sparse multivariate Laurent polynomials over Q(ζ_N).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed};

use super::cyclotomic::{fmt_scalar_term, CycScalar, FieldContext};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A variable name. Ordered naturally, so `y2 < y10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, Option<u64>, &str) {
        let s: &str = &self.0;
        let alpha_end = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let rest = &s[alpha_end..];
        let digit_end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        let num = rest[..digit_end].parse::<u64>().ok();
        (&s[..alpha_end], num, &rest[digit_end..])
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.split()
            .cmp(&other.split())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Exponent vector; zero exponents are never stored.
///
/// Monomials compare lexicographically, giving priority to the variable that
/// is largest in the natural order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: &Var, e: i64) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v.clone(), e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i64)>) -> Self {
        let mut map: BTreeMap<Var, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> i64 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Var, i64)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    /// Replace the exponent of `v`.
    pub fn with_exponent(&self, v: &Var, e: i64) -> Monomial {
        let mut pairs: Vec<(Var, i64)> = self.0.iter().filter(|(w, _)| w != v).cloned().collect();
        if e != 0 {
            pairs.push((v.clone(), e));
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
        }
        Monomial(pairs)
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|(_, e)| *e < 0)
    }

    /// True when every exponent of `self` is ≤ the one in `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// Monomial division (exponent subtraction), always defined.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (_, 0) => return a[i - 1].1.cmp(&0),
                (0, _) => return 0.cmp(&b[j - 1].1),
                _ => {
                    let (va, ea) = &a[i - 1];
                    let (vb, eb) = &b[j - 1];
                    match va.cmp(vb) {
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(eb);
                            }
                            i -= 1;
                            j -= 1;
                        }
                        Ordering::Greater => return ea.cmp(&0),
                        Ordering::Less => return 0.cmp(eb),
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial in canonical form: a map from monomials to nonzero
/// coefficients.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    ctx: FieldContext,
    terms: BTreeMap<Monomial, CycScalar>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl std::hash::Hash for LaurentPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl LaurentPoly {
    pub fn zero(ctx: &FieldContext) -> Self {
        LaurentPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &FieldContext) -> Self {
        Self::constant(ctx.one())
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(ctx: &FieldContext, n: i64) -> Self {
        Self::constant(ctx.from_int(n))
    }

    pub fn term(c: CycScalar, m: Monomial) -> Self {
        let ctx = c.context().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { ctx, terms }
    }

    pub fn var(ctx: &FieldContext, v: &str) -> Self {
        Self::term(ctx.one(), Monomial::var(&Var::new(v), 1))
    }

    pub fn var_pow(ctx: &FieldContext, v: &str, e: i64) -> Self {
        Self::term(ctx.one(), Monomial::var(&Var::new(v), e))
    }

    pub fn from_terms(
        ctx: &FieldContext,
        terms: impl IntoIterator<Item = (Monomial, CycScalar)>,
    ) -> Self {
        let mut p = LaurentPoly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, CycScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, CycScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> CycScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<CycScalar> {
        match self.terms.len() {
            0 => Some(self.ctx.zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// `(c, m)` if the polynomial is a single nonzero term.
    pub fn as_monomial_unit(&self) -> Option<(&CycScalar, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&self.ctx.from_rational(r.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.mul(m), a.clone()))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::validation("context mismatch"));
        }
        Ok(())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one(&self.ctx);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents require a single-term polynomial.
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            return Ok(self.pow(k as u32));
        }
        let inv = self.invert_unit()?;
        Ok(inv.pow((-k) as u32))
    }

    /// Inverse of a monomial unit `c·m`.
    pub fn invert_unit(&self) -> Result<Self> {
        let (c, m) = self
            .as_monomial_unit()
            .ok_or_else(|| Error::math("non-invertible image for Laurent variable"))?;
        Ok(LaurentPoly::term(c.inverse()?, m.inverse()))
    }

    pub fn degree_in(&self, v: &Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    pub fn min_degree_in(&self, v: &Var) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(v)).min()
    }

    /// Coefficient of v^k, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, v: &Var, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(v) == k)
            .map(|(m, c)| (m.with_exponent(v, 0), c.clone()))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// True when no variable carries a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| !m.has_negative())
    }

    pub fn has_negative_in(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) < 0)
    }

    /// Term-wise derivative with respect to `v`.
    pub fn partial(&self, v: &Var) -> Self {
        let mut out = LaurentPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                let coef = c.scale(&Rational::from_integer(e.into()));
                out.add_term(m.with_exponent(v, e - 1), &coef);
            }
        }
        out
    }

    /// Exponent tuples projected onto `vars`.
    pub fn support(&self, vars: &[Var]) -> BTreeSet<Vec<i64>> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|v| m.exponent(v)).collect())
            .collect()
    }

    /// Image under the ring homomorphism fixing scalars and sending each
    /// variable to its image. Variables without an image are kept.
    pub fn substitute(&self, images: &HashMap<Var, LaurentPoly>) -> Result<Self> {
        let mut cache: HashMap<(Var, i64), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut acc = LaurentPoly::constant(c.clone());
            let mut fixed = Monomial::one();
            for (v, e) in m.pairs() {
                match images.get(v) {
                    None => fixed = fixed.mul(&Monomial::var(v, *e)),
                    Some(img) => {
                        let key = (v.clone(), *e);
                        if !cache.contains_key(&key) {
                            let p = if *e < 0 {
                                img.invert_unit()?.pow((-e) as u32)
                            } else {
                                img.pow(*e as u32)
                            };
                            cache.insert(key.clone(), p);
                        }
                        acc = &acc * &cache[&key];
                    }
                }
            }
            if !fixed.is_one() {
                acc = acc.mul_monomial(&fixed);
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CycScalar) -> CycScalar) -> Self {
        let mut out = LaurentPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Largest monomial in the term order, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &CycScalar)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum exponent over all terms, for the given variables.
    pub fn min_exponents(&self) -> Monomial {
        let mut mins: BTreeMap<Var, i64> = BTreeMap::new();
        let vars = self.variables();
        for v in &vars {
            mins.insert(v.clone(), self.min_degree_in(v).unwrap_or(0));
        }
        Monomial::from_pairs(mins)
    }

    /// Exact quotient `self / g` in the Laurent ring, if it exists.
    pub fn exact_div(&self, g: &LaurentPoly) -> Option<LaurentPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero(&self.ctx));
        }
        if let Some((c, m)) = g.as_monomial_unit() {
            let inv = c.inverse().ok()?;
            return Some(self.scale(&inv).mul_monomial(&m.inverse()));
        }
        // Shift both into the polynomial ring without monomial factors; the
        // quotient is then a polynomial and lex division terminates.
        let fs = self.min_exponents();
        let gs = g.min_exponents();
        let f0 = self.mul_monomial(&fs.inverse());
        let g0 = g.mul_monomial(&gs.inverse());
        let (lm, lc) = g0.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inverse().ok()?;
        let mut rem = f0;
        let mut quot = LaurentPoly::zero(&self.ctx);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&lm);
            let qc = &rc * &lc_inv;
            let t = LaurentPoly::term(qc, qm);
            rem = &rem - &(&t * &g0);
            quot += &t;
        }
        Some(quot.mul_monomial(&fs.div(&gs)))
    }

    /// Division by `g`, monic in `v` with no negative powers of `v` in its
    /// coefficients: returns (q, r) with self = q·g + r and deg_v r < deg_v g.
    pub fn monic_divide(&self, g: &LaurentPoly, v: &Var) -> Result<(LaurentPoly, LaurentPoly)> {
        let dg = g
            .degree_in(v)
            .ok_or_else(|| Error::math("not monic in v"))?;
        if !g.coeff_in(v, dg).as_constant().is_some_and(|c| c.is_one()) || g.has_negative_in(v) {
            return Err(Error::math("not monic in v"));
        }
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(&self.ctx);
        while let Some(dr) = rem.degree_in(v) {
            if dr < dg {
                break;
            }
            let lead = rem.coeff_in(v, dr);
            let t = lead.mul_monomial(&Monomial::var(v, dr - dg));
            rem = &rem - &(&t * g);
            quot += &t;
        }
        Ok((quot, rem))
    }

    /// Multiply each term c·m by `weight(m)`; used for scalings x ↦ a·x.
    pub fn scale_by_monomial_weight(&self, weight: impl Fn(&Monomial) -> CycScalar) -> Self {
        let mut out = LaurentPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * &weight(m)));
        }
        out
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl std::ops::SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Sign and body of one printed term.
fn render_term(m: &Monomial, c: &CycScalar) -> Vec<(bool, String)> {
    if m.is_one() {
        return c
            .terms()
            .into_iter()
            .map(|(k, r)| (r.is_negative(), fmt_scalar_term(k, r)))
            .collect();
    }
    let mono = m.to_string();
    let ts = c.terms();
    if ts.len() == 1 {
        let (k, r) = ts[0];
        let body = if k == 0 && r.abs().is_one() {
            mono
        } else {
            format!("{}*{}", fmt_scalar_term(k, r), mono)
        };
        return vec![(r.is_negative(), body)];
    }
    vec![(false, format!("({c})*{mono}"))]
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            for (neg, body) in render_term(m, c) {
                match (first, neg) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                f.write_str(&body)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl LaurentPoly {
    /// Sum of constant parts, useful for checking `p(0)`-type conditions.
    pub fn constant_term(&self) -> CycScalar {
        self.coefficient(&Monomial::one())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}
