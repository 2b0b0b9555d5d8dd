#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidaut::exactalg::{parse_poly, Roster};
use rigidaut::models::{build_model, Model, VarietySpec};
use rigidaut::{cyclotomic_context, CycScalar, FieldContext, LaurentPoly, Monomial, Var};

pub fn field(n: u64) -> FieldContext {
    cyclotomic_context(n).unwrap()
}

pub fn poly(k: &FieldContext, text: &str, vars: &[&str]) -> LaurentPoly {
    parse_poly(text, &Roster::plain(vars), k).unwrap()
}

pub fn gds(k: &FieldContext, d: u32, roots: &[&str]) -> Model {
    let roots = roots.iter().map(|r| poly(k, r, &["x"])).collect();
    build_model(VarietySpec::gds_standard(k, d, roots).unwrap(), k).unwrap()
}

pub fn gds_p(k: &FieldContext, d: u32, p: &str) -> Model {
    build_model(VarietySpec::gds(d, poly(k, p, &["x", "y1"])).unwrap(), k).unwrap()
}

pub fn dvcon(k: &FieldContext, ks: &[u32], p: &str) -> Model {
    build_model(
        VarietySpec::dvcon(ks.to_vec(), poly(k, p, &["z"])).unwrap(),
        k,
    )
    .unwrap()
}

pub fn dvgen(k: &FieldContext, ks: &[u32], d: u32, s: &[&str]) -> Model {
    let names: Vec<String> = (0..ks.len()).map(|j| format!("y{}", j + 2)).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let s = s.iter().map(|c| poly(k, c, &vars)).collect();
    build_model(VarietySpec::dvgen(ks.to_vec(), d, s).unwrap(), k).unwrap()
}

pub fn fm(k: &FieldContext, a: u32, b: u32, c: u32, m: u32, n: u32) -> Model {
    build_model(VarietySpec::fm(a, b, c, m, n).unwrap(), k).unwrap()
}

pub fn dds(k: &FieldContext, d1: u32, d2: u32, p1: &str, p2: &str) -> Model {
    let p1 = poly(k, p1, &["x", "y1"]);
    let p2 = poly(k, p2, &["x", "y1", "y2"]);
    build_model(VarietySpec::dds(d1, d2, p1, p2).unwrap(), k).unwrap()
}

/// One model per family, as shipped with the command-line examples.
pub fn sample_models() -> Vec<Model> {
    let k12 = field(12);
    vec![
        gds(&k12, 2, &["0", "1"]),
        dvcon(&k12, &[2, 2], "z^3 + z"),
        dvgen(&k12, &[2], 3, &["1", "y2 + 1"]),
        fm(&field(70), 3, 4, 5, 2, 2),
        dds(&k12, 2, 2, "y1^2", "y2^2"),
    ]
}

/// Seeded sampler of scalars and small polynomials.
pub struct Gen {
    pub rng: ChaCha8Rng,
    k: FieldContext,
    roots: Vec<CycScalar>,
}

impl Gen {
    pub fn new(k: &FieldContext, seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            k: k.clone(),
            roots: k.roots_of_unity(),
        }
    }

    pub fn root(&mut self) -> CycScalar {
        self.roots.choose(&mut self.rng).unwrap().clone()
    }

    /// A small nonzero scalar, not necessarily a root of unity.
    pub fn scalar(&mut self) -> CycScalar {
        loop {
            let n = self.rng.random_range(-3i64..=3);
            let e = self.rng.random_range(0..self.k.degree() as i64 + 1);
            let c = &self.k.from_int(n) * &self.k.zeta_pow(e);
            let c = &c + &self.k.from_int(self.rng.random_range(-1..=1));
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Polynomial with up to `terms` terms of total degree ≤ `deg`; Laurent
    /// variables may carry exponents down to `-neg`.
    pub fn poly(
        &mut self,
        vars: &[&str],
        laurent: &[&str],
        terms: usize,
        deg: i64,
        neg: i64,
    ) -> LaurentPoly {
        let mut p = LaurentPoly::zero(&self.k);
        for _ in 0..self.rng.random_range(1..=terms) {
            let mut left = deg;
            let mut pairs = Vec::new();
            for v in vars {
                let lo = if laurent.contains(v) { -neg } else { 0 };
                let e = self.rng.random_range(lo..=left.max(lo));
                left -= e.max(0);
                pairs.push((Var::new(v), e));
            }
            let c = self.scalar();
            p.add_term(Monomial::from_pairs(pairs), &c);
        }
        p
    }

    /// A random element of the coordinate ring written in its generators.
    pub fn element(&mut self, model: &Model, terms: usize, deg: i64) -> LaurentPoly {
        let names: Vec<String> = model
            .generators()
            .iter()
            .map(|(g, _)| g.name().to_string())
            .collect();
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = self.poly(&vars, &[], terms, deg, 0);
        model.from_generators(&p).unwrap()
    }

    /// A random kernel element of the canonical derivation.
    pub fn kernel(&mut self, model: &Model, terms: usize, deg: i64) -> LaurentPoly {
        let names: Vec<String> = model
            .kernel_coordinates()
            .iter()
            .map(|v| v.name().to_string())
            .collect();
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        model.reduce(&self.poly(&vars, &[], terms, deg, 0))
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }
}

/// Three instances per family, for formula checks.
pub fn family_instances() -> Vec<Model> {
    let k12 = field(12);
    vec![
        gds(&k12, 2, &["0", "1"]),
        gds(&k12, 3, &["0", "1", "-1"]),
        gds_p(&k12, 2, "y1^3 + x*y1 + 1"),
        dvcon(&k12, &[2, 3], "z^3"),
        dvcon(&k12, &[2, 2], "z^3 + z"),
        dvcon(&k12, &[3], "z^4 + z^2 + 1"),
        dvgen(&k12, &[2], 3, &["1", "y2 + 1"]),
        dvgen(&k12, &[2, 2], 3, &["y2*y3", "1"]),
        dvgen(&k12, &[3], 2, &["y2^2 + 1"]),
        fm(&field(70), 3, 4, 5, 2, 2),
        fm(&field(12), 2, 3, 7, 2, 3),
        fm(&field(12), 3, 4, 5, 3, 2),
        dds(&k12, 2, 2, "y1^2", "y2^2"),
        dds(&k12, 2, 3, "y1^2 + x", "y2^2 + y1"),
        dds(&k12, 3, 2, "y1^3 - y1", "y2^2 + x*y2 + y1^2"),
    ]
}

/// A permutation of `0..k.len()` preserving the values of `k`.
pub fn permutation_within(g: &mut Gen, k: &[u32]) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..k.len()).collect();
    for v in k {
        let idx: Vec<usize> = (0..k.len()).filter(|&j| k[j] == *v).collect();
        let mut shuffled = idx.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut g.rng);
        for (i, j) in idx.into_iter().zip(shuffled) {
            sigma[i] = j;
        }
    }
    sigma
}

/// A random automorphism built from the family's own constructors.
pub fn random_automorphism(model: &Model, g: &mut Gen) -> rigidaut::autos::Automorphism {
    use rigidaut::autos::dv::condition_one_failure;
    use rigidaut::autos::gds::gds_solve_mu;
    use rigidaut::autos::*;
    use rigidaut::models::{canonical_derivation, Family};
    let k = model.context();
    let exp = |g: &mut Gen, aut: Automorphism| {
        if g.rng.random_bool(0.3) {
            let f = g.kernel(model, 2, 2);
            let e = exp_automorphism(model, &canonical_derivation(model), &f).unwrap();
            compose(model, &e, &aut).unwrap()
        } else {
            aut
        }
    };
    match model.family() {
        Family::Gds => {
            let id = GdsDatum::identity(model);
            let a = g.root();
            let mut alpha = id.alpha.clone();
            rand::seq::SliceRandom::shuffle(alpha.as_mut_slice(), &mut g.rng);
            let b = if g.coin() {
                model.zero()
            } else {
                g.poly(&["x"], &[], 3, 3, 0)
            };
            let candidates = [
                gds_solve_mu(model, &alpha, &a)
                    .map(|mu| GdsDatum::new(alpha.clone(), mu, a.clone(), b.clone())),
                Some(GdsDatum::new(id.alpha.clone(), k.one(), a, b.clone())),
                Some(GdsDatum::new(id.alpha.clone(), k.one(), k.one(), b)),
            ];
            candidates
                .into_iter()
                .flatten()
                .find_map(|d| {
                    gds_validate_datum(model, &d)
                        .ok()
                        .and_then(|_| gds_automorphism(model, &d).ok())
                })
                .unwrap_or_else(|| Automorphism::identity(model))
        }
        Family::DvCon | Family::DvGen => {
            let ks = match model.spec() {
                VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => k.clone(),
                _ => unreachable!(),
            };
            for _ in 0..50 {
                let s = Scaling {
                    sigma: permutation_within(g, &ks),
                    t: ks.iter().map(|_| g.root()).collect(),
                    tz: if g.coin() { k.one() } else { g.root() },
                };
                if condition_one_failure(model, &s).unwrap().is_none() {
                    let aut = if model.family() == Family::DvCon {
                        let quasi = dvcon_quasitorus(model, &s.tz);
                        let torus = dvcon_torus(model, &s.t).unwrap();
                        let sym = dvcon_symmetry(model, &s.sigma).unwrap();
                        let base = compose(model, &sym, &torus).unwrap();
                        match quasi {
                            Ok(q) => compose(model, &q, &base).unwrap(),
                            Err(_) => base,
                        }
                    } else {
                        dvgen_element(model, &s.sigma, &s.t, &s.tz).unwrap()
                    };
                    return exp(g, aut);
                }
            }
            exp(g, Automorphism::identity(model))
        }
        Family::Fm => {
            let star = fm_star(model, &g.root()).unwrap();
            let f = if g.coin() {
                model.zero()
            } else {
                g.kernel(model, 3, 3)
            };
            compose(model, &fm_plus(model, &f).unwrap(), &star).unwrap()
        }
        Family::Dds => {
            let w = match model.spec() {
                VarietySpec::Dds { d1, d2, .. } => (d1 + d2) as i64,
                _ => unreachable!(),
            };
            let b = if g.coin() {
                model.zero()
            } else {
                g.poly(&["x"], &[], 2, 2, 0)
                    .mul_monomial(&Monomial::var(&Var::new("x"), w))
            };
            for _ in 0..50 {
                let (lambda, a) = (g.root(), g.root());
                if let Ok(aut) = dds_automorphism(model, &lambda, &a, &b) {
                    return aut;
                }
            }
            dds_automorphism(model, &k.one(), &k.one(), &b).unwrap()
        }
    }
}
