//! Seeded cross-verification of closed forms against the oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::families::membership;
use super::IsotropyVerdict;
use crate::autos::dds::{dds_automorphism, dds_localized};
use crate::autos::dv::{condition_one_failure, scaling_automorphism};
use crate::autos::fm::fm_automorphism;
use crate::autos::gds::gds_solve_mu;
use crate::autos::{
    compose, gds_automorphism, gds_validate_datum, Automorphism, FmParams, GdsDatum, Scaling,
};
use crate::error::Result;
use crate::exactalg::{CycScalar, LaurentPoly, Monomial, Var};
use crate::models::{Family, Model, VarietySpec};

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub automorphism: String,
    pub factor: String,
    pub verdict: IsotropyVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub family: Family,
    pub seed: u64,
    pub version: &'static str,
    pub trials: usize,
    /// Samples with a closed form equal to the oracle.
    pub agreements: usize,
    /// Samples with no applicable closed form.
    pub oracle_only: usize,
    pub members: usize,
    pub errata: Vec<SampleRecord>,
    pub discrepancies: Vec<SampleRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

struct Sampler<'m> {
    model: &'m Model,
    rng: ChaCha8Rng,
    roots: Vec<CycScalar>,
}

impl Sampler<'_> {
    fn root(&mut self) -> CycScalar {
        self.roots[self.rng.random_range(0..self.roots.len())].clone()
    }

    fn coeff(&mut self) -> CycScalar {
        let k = self.model.context();
        let base = match self.rng.random_range(0..3) {
            0 => k.one(),
            1 => k.zeta(),
            _ => k.from_int(2),
        };
        if self.rng.random_bool(0.5) {
            -base
        } else {
            base
        }
    }

    /// Nonzero polynomial of degree ≤ 4 with at most 4 terms.
    fn poly(&mut self, vars: &[&str]) -> LaurentPoly {
        loop {
            let terms = self.rng.random_range(1..=4);
            let mut p = self.model.zero();
            for _ in 0..terms {
                let mut left = self.rng.random_range(0..=4);
                let mut pairs = Vec::new();
                for v in vars {
                    let e = self.rng.random_range(0..=left);
                    left -= e;
                    pairs.push((Var::new(v), e));
                }
                pairs.shuffle(&mut self.rng);
                let c = self.coeff();
                p.add_term(Monomial::from_pairs(pairs), &c);
            }
            let p = self.model.reduce(&p);
            if !p.is_zero() {
                return p;
            }
        }
    }

    fn maybe_constant(&mut self, vars: &[&str]) -> LaurentPoly {
        if self.rng.random_bool(0.3) {
            LaurentPoly::constant(self.coeff())
        } else {
            self.poly(vars)
        }
    }

    fn permutation_within(&mut self, k: &[u32]) -> Vec<usize> {
        let mut sigma: Vec<usize> = (0..k.len()).collect();
        let mut values: Vec<u32> = k.to_vec();
        values.sort_unstable();
        values.dedup();
        for v in values {
            let idx: Vec<usize> = (0..k.len()).filter(|&j| k[j] == v).collect();
            let mut shuffled = idx.clone();
            shuffled.shuffle(&mut self.rng);
            for (i, j) in idx.into_iter().zip(shuffled) {
                sigma[i] = j;
            }
        }
        sigma
    }
}

fn gds_sample(s: &mut Sampler) -> Result<(Automorphism, LaurentPoly)> {
    let m = s.model;
    let k = m.context();
    let id = GdsDatum::identity(m);
    let a = s.root();
    let mut alpha = id.alpha.clone();
    alpha.shuffle(&mut s.rng);
    let b = if s.rng.random_bool(0.5) {
        m.zero()
    } else {
        s.poly(&["x"])
    };
    let candidates = [
        gds_solve_mu(m, &alpha, &a)
            .map(|mu| GdsDatum::new(alpha.clone(), mu, a.clone(), b.clone())),
        Some(GdsDatum::new(
            id.alpha.clone(),
            k.one(),
            a.clone(),
            b.clone(),
        )),
        Some(GdsDatum::new(id.alpha.clone(), k.one(), k.one(), b)),
    ];
    let datum = candidates
        .into_iter()
        .flatten()
        .find(|d| gds_validate_datum(m, d).is_ok())
        .expect("the translation datum is always valid");
    let f = s.maybe_constant(&["x"]);
    Ok((gds_automorphism(m, &datum)?, f))
}

fn dv_k(model: &Model) -> Vec<u32> {
    match model.spec() {
        VarietySpec::DvCon { k, .. } | VarietySpec::DvGen { k, .. } => k.clone(),
        _ => Vec::new(),
    }
}

fn dvcon_sample(s: &mut Sampler) -> Result<(Automorphism, LaurentPoly)> {
    let m = s.model;
    let k = dv_k(m);
    let names: Vec<String> = m
        .kernel_coordinates()
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    let vars: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
    let ident: Vec<usize> = (0..k.len()).collect();
    let one = m.context().one();
    let torus = |s: &mut Sampler| Scaling {
        sigma: ident.clone(),
        t: k.iter().map(|_| s.root()).collect(),
        tz: one.clone(),
    };
    let mut scaling = match s.rng.random_range(0..4) {
        0 => torus(s),
        1 => Scaling {
            sigma: s.permutation_within(&k),
            t: vec![one.clone(); k.len()],
            tz: one.clone(),
        },
        2 => Scaling {
            sigma: ident.clone(),
            t: vec![one.clone(); k.len()],
            tz: s.root(),
        },
        _ => {
            let mut t = torus(s);
            t.sigma = s.permutation_within(&k);
            t.tz = s.root();
            t
        }
    };
    if condition_one_failure(m, &scaling)?.is_some() {
        scaling.tz = one.clone();
    }
    let h = s.maybe_constant(&vars);
    Ok((scaling_automorphism(m, &scaling, true)?, h))
}

fn dvgen_sample(s: &mut Sampler) -> Result<(Automorphism, LaurentPoly)> {
    let m = s.model;
    let k = dv_k(m);
    let names: Vec<String> = m
        .kernel_coordinates()
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    let vars: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
    let mut scaling = Scaling::identity(m);
    for _ in 0..20 {
        let candidate = Scaling {
            sigma: s.permutation_within(&k),
            t: k.iter().map(|_| s.root()).collect(),
            tz: s.root(),
        };
        if condition_one_failure(m, &candidate)?.is_none() {
            scaling = candidate;
            break;
        }
    }
    let h = s.maybe_constant(&vars);
    Ok((scaling_automorphism(m, &scaling, true)?, h))
}

fn fm_sample(s: &mut Sampler) -> Result<(Automorphism, LaurentPoly)> {
    let m = s.model;
    let mu = s.root();
    let f = if s.rng.random_bool(0.5) {
        m.zero()
    } else {
        s.poly(&["x", "y", "z"])
    };
    let h = if s.rng.random_bool(0.25) {
        m.parse_element("x + x^2")?
    } else {
        s.maybe_constant(&["x", "y", "z"])
    };
    Ok((fm_automorphism(m, &FmParams { mu, f })?, h))
}

fn dds_sample(s: &mut Sampler) -> Result<(Automorphism, LaurentPoly)> {
    let m = s.model;
    let (lambda, a) = (s.root(), s.root());
    let w = match m.spec() {
        VarietySpec::Dds { d1, d2, .. } => (d1 + d2) as i64,
        _ => 0,
    };
    let b = if s.rng.random_bool(0.5) {
        m.zero()
    } else {
        s.poly(&["x"])
            .mul_monomial(&Monomial::var(&Var::new("x"), w))
    };
    let f = s.maybe_constant(&["x"]);
    let theta =
        dds_automorphism(m, &lambda, &a, &b).or_else(|_| dds_localized(m, &lambda, &a, &b))?;
    Ok((theta, f))
}

/// Compare closed forms with the oracle on `trials` seeded samples.
pub fn cross_verify(model: &Model, trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut s = Sampler {
        model,
        rng: ChaCha8Rng::seed_from_u64(seed),
        roots: model.context().roots_of_unity(),
    };
    let mut report = VerifyReport {
        family: model.family(),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        trials,
        agreements: 0,
        oracle_only: 0,
        members: 0,
        errata: Vec::new(),
        discrepancies: Vec::new(),
    };
    for index in 0..trials {
        let (theta, factor) = match model.family() {
            Family::Gds => gds_sample(&mut s)?,
            Family::DvCon => dvcon_sample(&mut s)?,
            Family::DvGen => dvgen_sample(&mut s)?,
            Family::Fm => fm_sample(&mut s)?,
            Family::Dds => dds_sample(&mut s)?,
        };
        // occasionally exercise composites
        let theta = if index % 7 == 6 {
            compose(model, &theta, &theta)?
        } else {
            theta
        };
        let verdict = membership(model, &theta, &factor)?;
        if verdict.oracle {
            report.members += 1;
        }
        let record = |verdict: IsotropyVerdict| SampleRecord {
            index,
            automorphism: theta.params().to_string(),
            factor: factor.to_string(),
            verdict,
        };
        match verdict.closed_form {
            None => report.oracle_only += 1,
            Some(_) if !verdict.discrepancy => report.agreements += 1,
            Some(_) if verdict.erratum.is_some() => report.errata.push(record(verdict)),
            Some(_) => report.discrepancies.push(record(verdict)),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{cyclotomic_context, parse_poly, FieldContext, Roster};
    use crate::models::build_model;

    fn models() -> Vec<Model> {
        let k12 = cyclotomic_context(12).unwrap();
        let poly = |s: &str, vars: &[&str], k: &FieldContext| {
            parse_poly(s, &Roster::plain(vars), k).unwrap()
        };
        let gds = VarietySpec::gds_standard(
            &k12,
            2,
            vec![poly("0", &["x"], &k12), poly("1", &["x"], &k12)],
        )
        .unwrap();
        let dvcon = VarietySpec::dvcon(vec![2, 2], poly("z^3 + z", &["z"], &k12)).unwrap();
        let dvgen = VarietySpec::dvgen(
            vec![2],
            3,
            vec![poly("1", &["y2"], &k12), poly("y2^2", &["y2"], &k12)],
        )
        .unwrap();
        let dds = VarietySpec::dds(
            2,
            2,
            poly("y1^2", &["y1"], &k12),
            poly("y2^2", &["y2"], &k12),
        )
        .unwrap();
        let k70 = cyclotomic_context(70).unwrap();
        let fm = VarietySpec::fm(3, 4, 5, 2, 2).unwrap();
        vec![
            build_model(gds, &k12).unwrap(),
            build_model(dvcon, &k12).unwrap(),
            build_model(dvgen, &k12).unwrap(),
            build_model(dds, &k12).unwrap(),
            build_model(fm, &k70).unwrap(),
        ]
    }

    #[test]
    fn every_family_agrees() {
        for m in models() {
            let r = cross_verify(&m, 60, 7).unwrap();
            assert!(r.passed(), "{}: {:?}", m.family(), r.discrepancies);
            assert_eq!(r.agreements + r.oracle_only + r.errata.len(), 60);
            assert!(r.members > 0, "{}", m.family());
        }
    }

    #[test]
    fn empty_and_reproducible() {
        let m = &models()[0];
        let r = cross_verify(m, 0, 0).unwrap();
        assert_eq!((r.trials, r.agreements, r.passed()), (0, 0, true));
        let a = serde_json::to_string(&cross_verify(m, 20, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&cross_verify(m, 20, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
