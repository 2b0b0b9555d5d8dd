//! Cyclotomic number fields Q(ζ_N) in the power basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};
use crate::error::{Error, Result};

#[derive(Debug)]
struct FieldInner {
    conductor: u64,
    /// Coefficients of Φ_N, lowest degree first; monic.
    minpoly: Vec<BigInt>,
}

/// The field Q(ζ_N), identified by its conductor.
#[derive(Clone, Debug)]
pub struct FieldContext(Arc<FieldInner>);

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.conductor == other.0.conductor
    }
}

impl Eq for FieldContext {}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic with integer coefficients
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut quot = vec![BigInt::zero(); rem.len() + 1 - dl];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Φ_n as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut numerator = vec![BigInt::zero(); n as usize + 1];
    numerator[0] = -BigInt::one();
    numerator[n as usize] = BigInt::one();
    let mut product = vec![BigInt::one()];
    for d in 1..n {
        if n % d == 0 {
            product = poly_mul_int(&product, &cyclotomic_polynomial(d));
        }
    }
    poly_div_exact(&numerator, &product)
}

/// Build the context for Q(ζ_N).
pub fn cyclotomic_context(n: u64) -> Result<FieldContext> {
    if n == 0 {
        return Err(Error::validation("invalid conductor"));
    }
    Ok(FieldContext(Arc::new(FieldInner {
        conductor: n,
        minpoly: cyclotomic_polynomial(n),
    })))
}

impl FieldContext {
    pub fn new(n: u64) -> Result<Self> {
        cyclotomic_context(n)
    }

    pub fn conductor(&self) -> u64 {
        self.0.conductor
    }

    /// φ(N), the degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn minimal_polynomial(&self) -> Vec<Rational> {
        self.0
            .minpoly
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    /// Order of the full group of roots of unity in the field: lcm(2, N).
    pub fn root_group_order(&self) -> u64 {
        self.conductor().lcm(&2)
    }

    pub fn zero(&self) -> CycScalar {
        CycScalar {
            ctx: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycScalar {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> CycScalar {
        self.from_rational(rat(n, 1))
    }

    pub fn from_rational(&self, r: Rational) -> CycScalar {
        let mut s = self.zero();
        s.coeffs[0] = r;
        s
    }

    /// ζ_N.
    pub fn zeta(&self) -> CycScalar {
        self.zeta_pow(1)
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> CycScalar {
        let n = self.conductor() as i64;
        let e = k.rem_euclid(n) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        CycScalar {
            ctx: self.clone(),
            coeffs: self.reduce(raw),
        }
    }

    /// A primitive q-th root of unity, if the field contains one.
    pub fn primitive_root(&self, q: u64) -> Option<CycScalar> {
        if q == 0 {
            return None;
        }
        let n = self.conductor();
        if n % q == 0 {
            return Some(self.zeta_pow((n / q) as i64));
        }
        // -ζ_N has order 2N when N is odd
        if n % 2 == 1 && (2 * n) % q == 0 {
            let w = -self.zeta();
            return Some(w.pow((2 * n / q) as i64));
        }
        None
    }

    /// All roots of unity in the field, as powers of a fixed generator.
    pub fn roots_of_unity(&self) -> Vec<CycScalar> {
        let g = self
            .primitive_root(self.root_group_order())
            .expect("generator exists");
        let mut out = Vec::new();
        let mut cur = self.one();
        for _ in 0..self.root_group_order() {
            out.push(cur.clone());
            cur = &cur * &g;
        }
        out
    }

    fn reduce(&self, mut raw: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        let phi = &self.0.minpoly;
        if raw.len() > deg {
            for k in (deg..raw.len()).rev() {
                let c = std::mem::replace(&mut raw[k], Rational::zero());
                if c.is_zero() {
                    continue;
                }
                for i in 0..deg {
                    if !phi[i].is_zero() {
                        let t = &c * Rational::from_integer(phi[i].clone());
                        raw[k - deg + i] -= t;
                    }
                }
            }
            raw.truncate(deg);
        }
        raw.resize(deg, Rational::zero());
        raw
    }
}

/// An element of Q(ζ_N), stored by its coordinates in the basis 1, ζ, …, ζ^{φ(N)-1}.
#[derive(Clone, Debug)]
pub struct CycScalar {
    ctx: FieldContext,
    coeffs: Vec<Rational>,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for CycScalar {}

impl std::hash::Hash for CycScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl CycScalar {
    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn from_coeffs(ctx: &FieldContext, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() > ctx.degree() {
            return Ok(CycScalar {
                ctx: ctx.clone(),
                coeffs: ctx.reduce(coeffs),
            });
        }
        let mut c = coeffs;
        c.resize(ctx.degree(), Rational::zero());
        Ok(CycScalar {
            ctx: ctx.clone(),
            coeffs: c,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, when it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::validation("context mismatch"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycScalar {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::math("division by zero"));
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.ctx.from_rational(r.recip()));
        }
        let modulus: Vec<Rational> = self.ctx.minimal_polynomial();
        let (g, s) = ext_euclid(trim(self.coeffs.clone()), modulus);
        // g is a nonzero constant because Φ_N is irreducible
        debug_assert_eq!(g.len(), 1);
        let inv_g = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &inv_g).collect();
        let out = CycScalar::from_coeffs(&self.ctx, coeffs)?;
        debug_assert!((&out * self).is_one());
        Ok(out)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self
                .inverse()
                .expect("power of zero with negative exponent")
                .pow(-e);
        }
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least q ≥ 1 with a^q = 1, or None when a is not a root of unity.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = self.ctx.root_group_order();
        let mut cur = self.clone();
        for q in 1..=bound {
            if cur.is_one() {
                return Some(q);
            }
            cur = &cur * self;
        }
        None
    }

    /// Nonzero coordinates as (power of ζ, rational) pairs, highest power first.
    pub fn terms(&self) -> Vec<(usize, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// Alias kept for readability at call sites.
pub fn scalar_order(a: &CycScalar) -> Option<u64> {
    a.order()
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![Rational::zero()], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &c * y;
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn is_zero_poly(v: &[Rational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Returns (g, s) with s·a ≡ g (mod m).
fn ext_euclid(a: Vec<Rational>, m: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = upoly_divrem(&r0, &r1);
        let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        debug_assert!(self.ctx == rhs.ctx, "context mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycScalar {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        debug_assert!(self.ctx == rhs.ctx, "context mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycScalar {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        debug_assert!(self.ctx == rhs.ctx, "context mismatch");
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let deg = self.ctx.degree();
        let mut raw = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        CycScalar {
            ctx: self.ctx.clone(),
            coeffs: self.ctx.reduce(raw),
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn zeta_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "zeta".to_string(),
        _ => format!("zeta^{k}"),
    }
}

/// Render `|c|·ζ^k` without sign.
pub(crate) fn fmt_scalar_term(k: usize, c: &Rational) -> String {
    let a = c.abs();
    let z = zeta_power(k);
    if k == 0 {
        fmt_rational(&a)
    } else if a.is_one() {
        z
    } else {
        format!("{}*{}", fmt_rational(&a), z)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&fmt_scalar_term(*k, c))?;
        }
        Ok(())
    }
}
