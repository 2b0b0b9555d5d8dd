//! Family descriptions and their validation.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactalg::{parse_poly, FieldContext, LaurentPoly, Roster, Var};
use crate::fileformat::{parse_kv, Fields};

/// The five supported families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gds,
    DvCon,
    DvGen,
    Fm,
    Dds,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gds => "gds",
            Family::DvCon => "dvcon",
            Family::DvGen => "dvgen",
            Family::Fm => "fm",
            Family::Dds => "dds",
        }
    }

    pub fn from_name(s: &str) -> Result<Family> {
        Ok(match s {
            "gds" => Family::Gds,
            "dvcon" => Family::DvCon,
            "dvgen" => Family::DvGen,
            "fm" => Family::Fm,
            "dds" => Family::Dds,
            other => return Err(Error::validation(format!("unknown family '{other}'"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated family instance.
///
/// Danielewski varieties index their kernel coordinates as `y2..ym`, so `k[0]`
/// is the exponent of `y2` and `m = k.len() + 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum VarietySpec {
    /// `x^d y2 = P(x, y1)`. `roots` is set for standard form `P = ∏(y1 − σ_i(x))`.
    Gds {
        d: u32,
        roots: Option<Vec<LaurentPoly>>,
        p: LaurentPoly,
    },
    /// `y1 y2^k2 … ym^km = P(z)`.
    DvCon { k: Vec<u32>, p: LaurentPoly },
    /// `y1 y2^k2 … ym^km = z^d + s_{d−2} z^{d−2} + … + s_0`.
    DvGen {
        k: Vec<u32>,
        d: u32,
        s: Vec<LaurentPoly>,
    },
    /// `x^a + y^b + z^c = 0`, `x^m u − y^n v = 1`.
    Fm {
        a: u32,
        b: u32,
        c: u32,
        m: u32,
        n: u32,
    },
    /// `x^d1 y2 = P1(x, y1)`, `x^d2 y3 = P2(x, y1, y2)`.
    Dds {
        d1: u32,
        d2: u32,
        p1: LaurentPoly,
        p2: LaurentPoly,
    },
}

fn invalid(msg: impl fmt::Display) -> Error {
    Error::validation(format!("invalid spec: {msg}"))
}

/// Check `p` is a polynomial in `vars` only.
fn check_vars(p: &LaurentPoly, vars: &[&str], what: &str) -> Result<()> {
    Roster::plain(vars)
        .admits(p)
        .map_err(|e| invalid(format!("{what}: {}", e.message)))
}

/// Check `p` is monic in `v` of degree at least `min_deg`; returns the degree.
fn check_monic(p: &LaurentPoly, v: &str, min_deg: i64, what: &str) -> Result<i64> {
    let var = Var::new(v);
    let deg = p.degree_in(&var).unwrap_or(i64::MIN);
    if deg < min_deg {
        return Err(invalid(format!(
            "{what} must have {v}-degree at least {min_deg}"
        )));
    }
    let lead = p.coeff_in(&var, deg);
    if !lead.is_one() {
        return Err(invalid(format!("{what} must be monic in {v}")));
    }
    Ok(deg)
}

fn check_k(k: &[u32]) -> Result<()> {
    if k.is_empty() {
        return Err(invalid("m must be at least 2"));
    }
    if k.iter().any(|&e| e < 2) {
        return Err(invalid("every k_j must be at least 2"));
    }
    Ok(())
}

/// Names `y2..ym` for exponent list `k`.
pub fn kernel_names(k: &[u32]) -> Vec<String> {
    (0..k.len()).map(|j| format!("y{}", j + 2)).collect()
}

impl VarietySpec {
    /// Standard form from pairwise distinct roots `σ_i ∈ k[x]`.
    pub fn gds_standard(ctx: &FieldContext, d: u32, roots: Vec<LaurentPoly>) -> Result<Self> {
        if d < 2 {
            return Err(invalid("d must be at least 2"));
        }
        if roots.len() < 2 {
            return Err(invalid("at least two roots are required"));
        }
        for (i, s) in roots.iter().enumerate() {
            check_vars(s, &["x"], "root")?;
            if roots[..i].contains(s) {
                return Err(invalid("roots must be pairwise distinct"));
            }
        }
        let y1 = LaurentPoly::var(ctx, "y1");
        let p = roots
            .iter()
            .fold(LaurentPoly::one(ctx), |acc, s| &acc * &(&y1 - s));
        Ok(VarietySpec::Gds {
            d,
            roots: Some(roots),
            p,
        })
    }

    /// Explicit `P(x, y1)`, monic in `y1` of degree at least 2.
    pub fn gds(d: u32, p: LaurentPoly) -> Result<Self> {
        if d < 2 {
            return Err(invalid("d must be at least 2"));
        }
        check_vars(&p, &["x", "y1"], "P")?;
        check_monic(&p, "y1", 2, "P")?;
        Ok(VarietySpec::Gds { d, roots: None, p })
    }

    pub fn dvcon(k: Vec<u32>, p: LaurentPoly) -> Result<Self> {
        check_k(&k)?;
        check_vars(&p, &["z"], "P")?;
        let d = check_monic(&p, "z", 2, "P")?;
        if !p.coeff_in(&Var::new("z"), d - 1).is_zero() {
            return Err(invalid("P must have zero z^(d-1) coefficient"));
        }
        Ok(VarietySpec::DvCon { k, p })
    }

    /// `s[i]` is the coefficient of `z^i`, for `i = 0..d−2`.
    pub fn dvgen(k: Vec<u32>, d: u32, s: Vec<LaurentPoly>) -> Result<Self> {
        check_k(&k)?;
        if d < 2 {
            return Err(invalid("d must be at least 2"));
        }
        if s.len() != d as usize - 1 {
            return Err(invalid(format!(
                "expected {} coefficients s_0..s_{}",
                d - 1,
                d - 2
            )));
        }
        let names = kernel_names(&k);
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        for si in &s {
            check_vars(si, &names, "s_i")?;
        }
        Ok(VarietySpec::DvGen { k, d, s })
    }

    pub fn fm(a: u32, b: u32, c: u32, m: u32, n: u32) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(invalid("a, b, c must be positive"));
        }
        if a.gcd(&b) != 1 || a.gcd(&c) != 1 || b.gcd(&c) != 1 {
            return Err(invalid("a, b, c must be pairwise coprime"));
        }
        let (a64, b64, c64) = (a as u64, b as u64, c as u64);
        if b64 * c64 + a64 * c64 + a64 * b64 >= a64 * b64 * c64 {
            return Err(invalid("1/a + 1/b + 1/c must be less than 1"));
        }
        if m < 2 || n < 2 {
            return Err(invalid("m and n must be at least 2"));
        }
        Ok(VarietySpec::Fm { a, b, c, m, n })
    }

    pub fn dds(d1: u32, d2: u32, p1: LaurentPoly, p2: LaurentPoly) -> Result<Self> {
        if d1 < 2 || d2 < 2 {
            return Err(invalid("d1 and d2 must be at least 2"));
        }
        check_vars(&p1, &["x", "y1"], "P1")?;
        check_vars(&p2, &["x", "y1", "y2"], "P2")?;
        check_monic(&p1, "y1", 2, "P1")?;
        check_monic(&p2, "y2", 2, "P2")?;
        Ok(VarietySpec::Dds { d1, d2, p1, p2 })
    }

    pub fn family(&self) -> Family {
        match self {
            VarietySpec::Gds { .. } => Family::Gds,
            VarietySpec::DvCon { .. } => Family::DvCon,
            VarietySpec::DvGen { .. } => Family::DvGen,
            VarietySpec::Fm { .. } => Family::Fm,
            VarietySpec::Dds { .. } => Family::Dds,
        }
    }

    /// The right-hand side `P` of a Danielewski variety as a polynomial in
    /// `z` and the kernel coordinates.
    pub fn dv_polynomial(&self, ctx: &FieldContext) -> Option<LaurentPoly> {
        match self {
            VarietySpec::DvCon { p, .. } => Some(p.clone()),
            VarietySpec::DvGen { d, s, .. } => {
                let mut p = LaurentPoly::var_pow(ctx, "z", *d as i64);
                for (i, si) in s.iter().enumerate() {
                    p += &(si * &LaurentPoly::var_pow(ctx, "z", i as i64));
                }
                Some(p)
            }
            _ => None,
        }
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Gds {
                d, roots: Some(r), ..
            } => {
                let r: Vec<String> = r.iter().map(|s| s.to_string()).collect();
                write!(f, "gds d={d} sigma=[{}]", r.join(", "))
            }
            VarietySpec::Gds { d, roots: None, p } => write!(f, "gds d={d} p={p}"),
            VarietySpec::DvCon { k, p } => write!(f, "dvcon k={k:?} p={p}"),
            VarietySpec::DvGen { k, d, s } => {
                let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "dvgen k={k:?} d={d} s=[{}]", s.join(", "))
            }
            VarietySpec::Fm { a, b, c, m, n } => write!(f, "fm a={a} b={b} c={c} m={m} n={n}"),
            VarietySpec::Dds { d1, d2, p1, p2 } => write!(f, "dds d1={d1} d2={d2} p1={p1} p2={p2}"),
        }
    }
}

/// Default conductor when a variety file does not name one.
pub const DEFAULT_CONDUCTOR: u64 = 12;

/// Parse a variety file. Returns the spec and its field.
pub fn parse_variety(text: &str) -> Result<(VarietySpec, FieldContext)> {
    let table = parse_kv(text)?;
    let f = Fields::new(&table, "variety");
    let family = Family::from_name(&f.string("family")?)?;
    let n = if f.has("cyclotomic_order") {
        f.int("cyclotomic_order")?
    } else {
        DEFAULT_CONDUCTOR as i64
    };
    if n < 1 {
        return Err(Error::validation("invalid conductor"));
    }
    let ctx = FieldContext::new(n as u64)?;
    let poly = |key: &str, vars: &[&str]| -> Result<LaurentPoly> {
        parse_poly(&f.string(key)?, &Roster::plain(vars), &ctx)
    };
    let uint_list = |key: &str| -> Result<Vec<u32>> {
        f.int_list(key)?
            .into_iter()
            .map(|v| {
                u32::try_from(v)
                    .map_err(|_| Error::validation(format!("{key}: entries must be nonnegative")))
            })
            .collect()
    };
    let common = ["family", "cyclotomic_order"];
    let allow = |extra: &[&str]| {
        let mut keys = common.to_vec();
        keys.extend_from_slice(extra);
        f.only(&keys)
    };
    let spec = match family {
        Family::Gds => {
            allow(&["d", "sigma", "p"])?;
            let d = f.uint("d")?;
            match (f.has("sigma"), f.has("p")) {
                (true, false) => {
                    let roots = f
                        .string_list("sigma")?
                        .iter()
                        .map(|s| parse_poly(s, &Roster::plain(&["x"]), &ctx))
                        .collect::<Result<Vec<_>>>()?;
                    VarietySpec::gds_standard(&ctx, d, roots)?
                }
                (false, true) => VarietySpec::gds(d, poly("p", &["x", "y1"])?)?,
                _ => {
                    return Err(Error::validation(
                        "variety: gds needs exactly one of 'sigma' or 'p'",
                    ))
                }
            }
        }
        Family::DvCon => {
            allow(&["m", "k", "p"])?;
            let k = uint_list("k")?;
            check_m(f.uint("m")?, &k)?;
            VarietySpec::dvcon(k, poly("p", &["z"])?)?
        }
        Family::DvGen => {
            allow(&["m", "k", "d", "s"])?;
            let k = uint_list("k")?;
            check_m(f.uint("m")?, &k)?;
            let names = kernel_names(&k);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let s = f
                .string_list("s")?
                .iter()
                .map(|s| parse_poly(s, &Roster::plain(&names), &ctx))
                .collect::<Result<Vec<_>>>()?;
            VarietySpec::dvgen(k, f.uint("d")?, s)?
        }
        Family::Fm => {
            allow(&["a", "b", "c", "m", "n"])?;
            VarietySpec::fm(
                f.uint("a")?,
                f.uint("b")?,
                f.uint("c")?,
                f.uint("m")?,
                f.uint("n")?,
            )?
        }
        Family::Dds => {
            allow(&["d1", "d2", "p1", "p2"])?;
            VarietySpec::dds(
                f.uint("d1")?,
                f.uint("d2")?,
                poly("p1", &["x", "y1"])?,
                poly("p2", &["x", "y1", "y2"])?,
            )?
        }
    };
    Ok((spec, ctx))
}

fn check_m(m: u32, k: &[u32]) -> Result<()> {
    if m as usize != k.len() + 1 {
        return Err(invalid(format!(
            "k must list m-1 = {} exponents",
            m.saturating_sub(1)
        )));
    }
    Ok(())
}
