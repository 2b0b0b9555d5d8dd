//! Automorphism files: key–value sections discriminated by the model family.
//!
//! Every family accepts `kind = identity`, and `kind = exp` with `f = "..."`
//! for the exponential of `f` times the canonical derivation. An optional
//! `family` key must agree with the model.

use super::dds::dds_automorphism;
use super::dv::{dvcon_quasitorus, dvcon_symmetry, dvcon_torus, dvgen_element};
use super::fm::{fm_plus, fm_star};
use super::gds::{gds_automorphism, GdsDatum};
use super::{exp_automorphism, Automorphism};
use crate::error::{Error, Result};
use crate::exactalg::{parse_scalar, CycScalar};
use crate::fileformat::{parse_kv, Fields};
use crate::models::{canonical_derivation, Family, Model};

fn scalar(f: &Fields, model: &Model, key: &str, default: Option<CycScalar>) -> Result<CycScalar> {
    match (f.opt_string(key)?, default) {
        (Some(s), _) => parse_scalar(&s, model.context()),
        (None, Some(d)) => Ok(d),
        (None, None) => f.string(key).map(|_| unreachable!()),
    }
}

fn scalars(f: &Fields, model: &Model, key: &str) -> Result<Vec<CycScalar>> {
    f.string_list(key)?
        .iter()
        .map(|s| parse_scalar(s, model.context()))
        .collect()
}

/// 1-based indices shifted by `offset` to 0-based positions.
fn permutation(f: &Fields, key: &str, offset: i64, len: usize) -> Result<Vec<usize>> {
    let raw = f.int_list(key)?;
    raw.iter()
        .map(|&i| {
            let j = i - offset;
            if j < 0 || j as usize >= len {
                Err(Error::validation(format!("{key}: index {i} out of range")))
            } else {
                Ok(j as usize)
            }
        })
        .collect()
}

fn element(f: &Fields, model: &Model, key: &str) -> Result<crate::exactalg::LaurentPoly> {
    match f.opt_string(key)? {
        Some(s) => model.parse_element(&s),
        None => Ok(model.zero()),
    }
}

/// Parse an automorphism of `model`.
pub fn parse_automorphism(model: &Model, text: &str) -> Result<Automorphism> {
    let table = parse_kv(text)?;
    let f = Fields::new(&table, "automorphism");
    if let Some(name) = f.opt_string("family")? {
        if Family::from_name(&name)? != model.family() {
            return Err(Error::validation(format!(
                "automorphism is for family '{name}' but the variety is '{}'",
                model.family()
            )));
        }
    }
    let kind = f.opt_string("kind")?;
    match kind.as_deref() {
        Some("identity") => {
            f.only(&["family", "kind"])?;
            return Ok(Automorphism::identity(model));
        }
        Some("exp") => {
            f.only(&["family", "kind", "f"])?;
            let factor = model.parse_element(&f.string("f")?)?;
            return exp_automorphism(model, &canonical_derivation(model), &factor);
        }
        _ => {}
    }
    let k = model.context();
    let unknown_kind = |allowed: &str| {
        Error::validation(format!(
            "automorphism: kind must be one of {allowed}, identity, exp"
        ))
    };
    match model.family() {
        Family::Gds => {
            f.only(&["family", "alpha", "mu", "a", "b"])?;
            if kind.is_some() {
                return Err(unknown_kind("(none)"));
            }
            let mut datum = GdsDatum::identity(model);
            if f.has("alpha") {
                datum.alpha = permutation(&f, "alpha", 1, datum.alpha.len())?;
            }
            datum.mu = scalar(&f, model, "mu", Some(k.one()))?;
            datum.a = scalar(&f, model, "a", Some(k.one()))?;
            datum.b = element(&f, model, "b")?;
            gds_automorphism(model, &datum)
        }
        Family::DvCon => {
            let m = model.kernel_coordinates().len();
            match kind.as_deref() {
                Some("torus") => {
                    f.only(&["family", "kind", "lambda"])?;
                    dvcon_torus(model, &scalars(&f, model, "lambda")?)
                }
                Some("symmetry") => {
                    f.only(&["family", "kind", "sigma"])?;
                    dvcon_symmetry(model, &permutation(&f, "sigma", 2, m)?)
                }
                Some("quasitorus") => {
                    f.only(&["family", "kind", "t"])?;
                    dvcon_quasitorus(model, &scalar(&f, model, "t", None)?)
                }
                _ => Err(unknown_kind("torus, symmetry, quasitorus")),
            }
        }
        Family::DvGen => {
            f.only(&["family", "sigma", "t"])?;
            if kind.is_some() {
                return Err(unknown_kind("(none)"));
            }
            let m = model.kernel_coordinates().len();
            let sigma = if f.has("sigma") {
                permutation(&f, "sigma", 2, m)?
            } else {
                (0..m).collect()
            };
            let mut t = if f.has("t") {
                scalars(&f, model, "t")?
            } else {
                vec![k.one(); m + 1]
            };
            if t.len() != m + 1 {
                return Err(Error::validation(format!(
                    "automorphism: t must list {} scalars",
                    m + 1
                )));
            }
            let tz = t.pop().expect("nonempty");
            dvgen_element(model, &sigma, &t, &tz)
        }
        Family::Fm => match kind.as_deref() {
            Some("plus") => {
                f.only(&["family", "kind", "f"])?;
                fm_plus(model, &model.parse_element(&f.string("f")?)?)
            }
            Some("star") => {
                f.only(&["family", "kind", "mu"])?;
                fm_star(model, &scalar(&f, model, "mu", None)?)
            }
            _ => Err(unknown_kind("plus, star")),
        },
        Family::Dds => {
            f.only(&["family", "lambda", "a", "b"])?;
            if kind.is_some() {
                return Err(unknown_kind("(none)"));
            }
            let lambda = scalar(&f, model, "lambda", Some(k.one()))?;
            let a = scalar(&f, model, "a", Some(k.one()))?;
            dds_automorphism(model, &lambda, &a, &element(&f, model, "b")?)
        }
    }
}
