//! Text grammar for polynomials.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' int)*
//! atom     := rational | 'zeta' | ident | '(' expr ')'
//! rational := digits ('/' digits)?
//! int      := ['-'] digits | '(' ['-'] digits ')'
//! ```
//!
//! A negative exponent is accepted only on a monomial whose variables are all
//! Laurent-flagged in the roster.

use num_bigint::BigInt;
use num_traits::Zero;

use super::cyclotomic::FieldContext;
use super::poly::{LaurentPoly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Allowed variables with their Laurent flags.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Roster {
    vars: Vec<(Var, bool)>,
}

impl Roster {
    pub fn new(vars: &[(&str, bool)]) -> Self {
        Roster {
            vars: vars.iter().map(|(n, l)| (Var::new(n), *l)).collect(),
        }
    }

    /// All variables ordinary (no negative exponents).
    pub fn plain(names: &[&str]) -> Self {
        Roster {
            vars: names.iter().map(|n| (Var::new(n), false)).collect(),
        }
    }

    pub fn empty() -> Self {
        Roster::default()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|(v, _)| v.name() == name)
    }

    pub fn lookup(&self, name: &str) -> Option<&(Var, bool)> {
        self.vars.iter().find(|(v, _)| v.name() == name)
    }

    pub fn is_laurent(&self, v: &Var) -> bool {
        self.vars.iter().any(|(w, l)| w == v && *l)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.iter().map(|(v, _)| v)
    }

    pub fn entries(&self) -> &[(Var, bool)] {
        &self.vars
    }

    /// Check that `p` uses only roster variables with admissible exponents.
    pub fn admits(&self, p: &LaurentPoly) -> Result<()> {
        for m in p.terms().keys() {
            for (v, e) in m.pairs() {
                match self.vars.iter().find(|(w, _)| w == v) {
                    None => return Err(Error::validation(format!("unknown variable '{v}'"))),
                    Some((_, laurent)) => {
                        if *e < 0 && !laurent {
                            return Err(Error::validation(format!(
                                "negative exponent on non-Laurent variable '{v}'"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(s.parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::parse(format!(
                    "unexpected character '{other}' at {i}"
                )))
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    roster: &'a Roster,
    ctx: &'a FieldContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err_here(&self, what: &str) -> Error {
        match self.toks.get(self.pos) {
            Some((at, t)) => Error::parse(format!("{what} at offset {at} (found {t:?})")),
            None => Error::parse(format!("{what} at end of input")),
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.ctx);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            if negate {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let mut base = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.bump();
            let e = self.int()?;
            base = self.power(&base, e)?;
        }
        Ok(base)
    }

    fn power(&self, base: &LaurentPoly, e: i64) -> Result<LaurentPoly> {
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        let (_, m) = base
            .as_monomial_unit()
            .ok_or_else(|| Error::parse("negative exponent on a non-monomial factor"))?;
        for v in m.vars() {
            if !self.roster.is_laurent(v) {
                return Err(Error::parse(format!(
                    "negative exponent on non-Laurent variable '{v}'"
                )));
            }
        }
        base.pow_int(e).map_err(|e| Error::parse(e.message))
    }

    fn int(&mut self) -> Result<i64> {
        let paren = matches!(self.peek(), Some(Tok::LParen));
        if paren {
            self.bump();
        }
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.bump();
        }
        let n = match self.bump() {
            Some(Tok::Num(n)) => {
                i64::try_from(n).map_err(|_| Error::parse("exponent out of range"))?
            }
            _ => {
                self.pos -= 1;
                return Err(self.err_here("expected integer exponent"));
            }
        };
        if paren && self.bump() != Some(Tok::RParen) {
            self.pos -= 1;
            return Err(self.err_here("expected ')'"));
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut r = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => r /= Rational::from_integer(d),
                        _ => {
                            self.pos -= 1;
                            return Err(self.err_here("expected positive denominator"));
                        }
                    }
                }
                Ok(LaurentPoly::constant(self.ctx.from_rational(r)))
            }
            Some(Tok::Ident(name)) => {
                if name == "zeta" {
                    return Ok(LaurentPoly::constant(self.ctx.zeta()));
                }
                match self.roster.lookup(&name) {
                    Some((v, _)) => Ok(LaurentPoly::var(self.ctx, v.name())),
                    None => Err(Error::parse(format!("unknown variable '{name}'"))),
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => {
                        self.pos -= 1;
                        Err(self.err_here("expected ')'"))
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err_here("expected a number, variable or '('"))
            }
        }
    }
}

/// Parse `text` into a polynomial over `ctx` in the roster's variables.
pub fn parse_poly(text: &str, roster: &Roster, ctx: &FieldContext) -> Result<LaurentPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        roster,
        ctx,
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a scalar (an expression with no variables).
pub fn parse_scalar(text: &str, ctx: &FieldContext) -> Result<super::cyclotomic::CycScalar> {
    let p = parse_poly(text, &Roster::empty(), ctx)?;
    p.as_constant()
        .ok_or_else(|| Error::parse("expected a scalar"))
}
