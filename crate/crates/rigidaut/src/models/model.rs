//! Coordinate-ring models inside Laurent polynomial rings.

use std::collections::HashMap;
use std::sync::Arc;

use super::membership;
use super::spec::{kernel_names, Family, VarietySpec};
use crate::error::{Error, Result};
use crate::exactalg::{parse_poly, FieldContext, LaurentPoly, Monomial, Roster, Var};

/// Rewrite `var^exponent → replacement`, applied until the exponent drops
/// below `exponent`.
#[derive(Clone, Debug)]
struct Reduction {
    var: Var,
    exponent: i64,
    replacement: LaurentPoly,
}

/// A family instance embedded in a Laurent ring.
///
/// Elements are plain [`LaurentPoly`] values in the coordinates; call
/// [`Model::reduce`] after arithmetic that may create `z^c` terms (FM only).
#[derive(Clone, Debug)]
pub struct Model {
    spec: VarietySpec,
    ctx: FieldContext,
    coords: Roster,
    kernel: Vec<Var>,
    generators: Vec<(Var, LaurentPoly)>,
    gen_roster: Roster,
    reduction: Option<Reduction>,
    id: Arc<str>,
}

impl Model {
    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    /// Coordinate roster; Laurent-flagged entries are the kernel coordinates.
    pub fn coordinates(&self) -> &Roster {
        &self.coords
    }

    pub fn kernel_coordinates(&self) -> &[Var] {
        &self.kernel
    }

    /// Ring generators with their images, in presentation order.
    pub fn generators(&self) -> &[(Var, LaurentPoly)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&LaurentPoly> {
        self.generators
            .iter()
            .find(|(v, _)| v.name() == name)
            .map(|(_, p)| p)
    }

    pub fn generator_roster(&self) -> &Roster {
        &self.gen_roster
    }

    /// Stable identifier used to detect mixing values from different models.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(&self.ctx)
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(&self.ctx)
    }

    pub fn var(&self, name: &str) -> LaurentPoly {
        LaurentPoly::var(&self.ctx, name)
    }

    /// Apply the FM rewrite `z^c → −x^a − y^b`; identity elsewhere.
    pub fn reduce(&self, e: &LaurentPoly) -> LaurentPoly {
        let Some(red) = &self.reduction else {
            return e.clone();
        };
        if e.degree_in(&red.var).unwrap_or(0) < red.exponent {
            return e.clone();
        }
        let mut powers: HashMap<i64, LaurentPoly> = HashMap::new();
        let mut out = self.zero();
        for (m, c) in e.terms() {
            let k = m.exponent(&red.var);
            if k < red.exponent {
                out.add_term(m.clone(), c);
                continue;
            }
            let (q, r) = (k / red.exponent, k % red.exponent);
            let pw = powers
                .entry(q)
                .or_insert_with(|| red.replacement.pow(q as u32));
            let rest = m.with_exponent(&red.var, r);
            out += &pw.mul_monomial(&rest).scale(c);
        }
        out
    }

    /// Parse an element written in the generator names.
    pub fn parse_element(&self, text: &str) -> Result<LaurentPoly> {
        let p = parse_poly(text, &self.gen_roster, &self.ctx)?;
        self.from_generators(&p)
    }

    /// Image of a polynomial in the generator names.
    pub fn from_generators(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let images: HashMap<Var, LaurentPoly> = self.generators.iter().cloned().collect();
        Ok(self.reduce(&p.substitute(&images)?))
    }

    /// Express `e` as a polynomial in the generators.
    pub fn represent(&self, e: &LaurentPoly) -> Result<LaurentPoly> {
        membership::represent(self, e)
    }

    pub fn is_member(&self, e: &LaurentPoly) -> bool {
        self.represent(e).is_ok()
    }

    /// Text in generator names when `e` lies in the ring, else coordinate form.
    pub fn display(&self, e: &LaurentPoly) -> String {
        match self.represent(e) {
            Ok(r) => r.to_string(),
            Err(_) => e.to_string(),
        }
    }

    /// Defining relations as polynomials in the generator names.
    pub fn relations(&self) -> Vec<LaurentPoly> {
        let k = &self.ctx;
        let v = |n: &str| LaurentPoly::var(k, n);
        let vp = |n: &str, e: u32| LaurentPoly::var_pow(k, n, e as i64);
        match &self.spec {
            VarietySpec::Gds { d, p, .. } => vec![&(&vp("x", *d) * &v("y2")) - p],
            VarietySpec::DvCon { k: ks, .. } | VarietySpec::DvGen { k: ks, .. } => {
                let mono = kernel_monomial(ks, 1);
                let p = self.spec.dv_polynomial(k).expect("dv family");
                vec![&v("y1").mul_monomial(&mono) - &p]
            }
            VarietySpec::Fm { a, b, c, m, n } => vec![
                &(&vp("x", *a) + &vp("y", *b)) + &vp("z", *c),
                &(&(&vp("x", *m) * &v("u")) - &(&vp("y", *n) * &v("v"))) - &LaurentPoly::one(k),
            ],
            VarietySpec::Dds { d1, d2, p1, p2 } => vec![
                &(&vp("x", *d1) * &v("y2")) - p1,
                &(&vp("x", *d2) * &v("y3")) - p2,
            ],
        }
    }

    /// Each relation mapped into the Laurent ring; all are zero for a valid model.
    pub fn relation_residues(&self) -> Result<Vec<LaurentPoly>> {
        self.relations()
            .iter()
            .map(|r| self.from_generators(r))
            .collect()
    }
}

/// `∏ y_j^(sign·k_j)` over `y2..ym`.
pub fn kernel_monomial(k: &[u32], sign: i64) -> Monomial {
    Monomial::from_pairs(
        kernel_names(k)
            .iter()
            .zip(k)
            .map(|(n, &e)| (Var::new(n), sign * e as i64)),
    )
}

/// Coordinate name and whether it may be inverted.
type Coordinate = (String, bool);
type Generator = (String, LaurentPoly);

/// Build the localization model of `spec` over `ctx`.
pub fn build_model(spec: VarietySpec, ctx: &FieldContext) -> Result<Model> {
    check_context(&spec, ctx)?;
    let k = ctx;
    let var = |n: &str| LaurentPoly::var(k, n);
    let x_pow = |e: i64| Monomial::var(&Var::new("x"), e);
    let mut reduction = None;
    let (coords, generators): (Vec<Coordinate>, Vec<Generator>) = match &spec {
        VarietySpec::Gds { d, p, .. } => {
            let y2 = p.mul_monomial(&x_pow(-(*d as i64)));
            (
                vec![("x".into(), true), ("y1".into(), false)],
                vec![
                    ("x".into(), var("x")),
                    ("y1".into(), var("y1")),
                    ("y2".into(), y2),
                ],
            )
        }
        VarietySpec::DvCon { k: ks, .. } | VarietySpec::DvGen { k: ks, .. } => {
            let p = spec.dv_polynomial(k).expect("dv family");
            let y1 = p.mul_monomial(&kernel_monomial(ks, -1));
            let names = kernel_names(ks);
            let mut coords: Vec<(String, bool)> = names.iter().map(|n| (n.clone(), true)).collect();
            coords.push(("z".into(), false));
            let mut gens = vec![("y1".to_string(), y1)];
            gens.extend(names.iter().map(|n| (n.clone(), var(n))));
            gens.push(("z".into(), var("z")));
            (coords, gens)
        }
        VarietySpec::Fm { a, b, c, m, n } => {
            let u = &(&var("v") * &LaurentPoly::var_pow(k, "y", *n as i64)) + &LaurentPoly::one(k);
            let u = u.mul_monomial(&x_pow(-(*m as i64)));
            reduction = Some(Reduction {
                var: Var::new("z"),
                exponent: *c as i64,
                replacement: -(&LaurentPoly::var_pow(k, "x", *a as i64)
                    + &LaurentPoly::var_pow(k, "y", *b as i64)),
            });
            (
                vec![
                    ("x".into(), true),
                    ("y".into(), false),
                    ("z".into(), false),
                    ("v".into(), false),
                ],
                vec![
                    ("x".into(), var("x")),
                    ("y".into(), var("y")),
                    ("z".into(), var("z")),
                    ("u".into(), u),
                    ("v".into(), var("v")),
                ],
            )
        }
        VarietySpec::Dds { d1, d2, p1, p2 } => {
            let y2 = p1.mul_monomial(&x_pow(-(*d1 as i64)));
            let sub: HashMap<Var, LaurentPoly> =
                [(Var::new("y2"), y2.clone())].into_iter().collect();
            let y3 = p2.substitute(&sub)?.mul_monomial(&x_pow(-(*d2 as i64)));
            (
                vec![("x".into(), true), ("y1".into(), false)],
                vec![
                    ("x".into(), var("x")),
                    ("y1".into(), var("y1")),
                    ("y2".into(), y2),
                    ("y3".into(), y3),
                ],
            )
        }
    };
    let coord_refs: Vec<(&str, bool)> = coords.iter().map(|(n, l)| (n.as_str(), *l)).collect();
    let gen_refs: Vec<(&str, bool)> = generators
        .iter()
        .map(|(n, _)| (n.as_str(), coords.iter().any(|(c, l)| c == n && *l)))
        .collect();
    // The FM kernel is all of R = k[x,y,z]/(x^a+y^b+z^c), not only x.
    let kernel = match spec.family() {
        Family::Fm => vec![Var::new("x"), Var::new("y"), Var::new("z")],
        _ => coords
            .iter()
            .filter(|(_, l)| *l)
            .map(|(n, _)| Var::new(n))
            .collect(),
    };
    let model = Model {
        id: Arc::from(format!("{spec} N={}", ctx.conductor())),
        kernel,
        coords: Roster::new(&coord_refs),
        gen_roster: Roster::new(&gen_refs),
        generators: generators
            .into_iter()
            .map(|(n, p)| (Var::new(&n), p))
            .collect(),
        spec,
        ctx: ctx.clone(),
        reduction,
    };
    verified(model)
}

fn verified(model: Model) -> Result<Model> {
    for r in model.relation_residues()? {
        if !r.is_zero() {
            return Err(Error::math(format!(
                "defining relation does not vanish: {r}"
            )));
        }
    }
    Ok(model)
}

fn check_context(spec: &VarietySpec, ctx: &FieldContext) -> Result<()> {
    let polys: Vec<&LaurentPoly> = match spec {
        VarietySpec::Gds { p, .. } => vec![p],
        VarietySpec::DvCon { p, .. } => vec![p],
        VarietySpec::DvGen { s, .. } => s.iter().collect(),
        VarietySpec::Fm { .. } => vec![],
        VarietySpec::Dds { p1, p2, .. } => vec![p1, p2],
    };
    if polys.iter().any(|p| p.context() != ctx) {
        return Err(Error::validation("context mismatch"));
    }
    Ok(())
}
