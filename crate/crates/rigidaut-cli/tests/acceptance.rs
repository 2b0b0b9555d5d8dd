//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#[path = "../../rigidaut/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidaut::autos::dv::condition_one_failure;
use rigidaut::autos::*;
use rigidaut::isotropy::*;
use rigidaut::models::*;
use rigidaut::{CycScalar, LaurentPoly, Monomial, Var};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn delta(model: &Model, h: &LaurentPoly) -> Derivation {
    replica(model, &canonical_derivation(model), h).unwrap()
}

fn in_aut(model: &Model, theta: &Automorphism, h: &LaurentPoly) -> bool {
    oracle(model, theta, &delta(model, h)).unwrap().0
}

// 1 --------------------------------------------------------------------------

fn expected_formulas(model: &Model) -> Vec<(&'static str, LaurentPoly)> {
    let k = model.context();
    let v = Var::new;
    let x_pow = |e: u32| LaurentPoly::var_pow(k, "x", e as i64);
    match model.spec() {
        VarietySpec::Gds { d, p, .. } => vec![("y1", x_pow(*d)), ("y2", p.partial(&v("y1")))],
        VarietySpec::DvCon { k: ks, .. } | VarietySpec::DvGen { k: ks, .. } => {
            let p = model.spec().dv_polynomial(k).unwrap();
            let mono = LaurentPoly::term(k.one(), kernel_monomial(ks, 1));
            vec![("y1", p.partial(&v("z"))), ("z", mono)]
        }
        VarietySpec::Fm { m, n, .. } => vec![
            ("u", LaurentPoly::var_pow(k, "y", *n as i64)),
            ("v", x_pow(*m)),
        ],
        VarietySpec::Dds { d1, d2, p1, p2 } => {
            let dp1 = p1.partial(&v("y1"));
            let y3 = &(&p2.partial(&v("y1")) * &x_pow(*d1)) + &(&p2.partial(&v("y2")) * &dp1);
            vec![
                ("y1", x_pow(d1 + d2)),
                ("y2", &dp1 * &x_pow(*d2)),
                ("y3", y3),
            ]
        }
    }
}

fn canonical_consistency() -> Outcome {
    let mut checks = 0;
    for model in family_instances() {
        let d = canonical_derivation(&model);
        for (g, formula) in expected_formulas(&model) {
            let got = derive(&model, &d, model.generator(g).unwrap());
            let want = model.from_generators(&formula).unwrap();
            ensure!(
                got == want,
                "{}: D({g}) = {} but formula gives {}",
                model.spec(),
                got,
                want
            );
            checks += 1;
        }
    }
    Ok(format!("{checks} generator images on 15 instances"))
}

// 2 --------------------------------------------------------------------------

fn gds_theorem() -> Outcome {
    let k = field(12);
    let mut checks = 0;
    for d in [2, 3] {
        let m = gds(&k, d, &["0", "1"]);
        let id = GdsDatum::identity(&m);
        for f in ["1", "x", "x + x^2", "x^2 + x^4"] {
            let fp = poly(&k, f, &["x"]);
            let mut members = Vec::new();
            for a in k.roots_of_unity() {
                let datum = GdsDatum::new(id.alpha.clone(), k.one(), a.clone(), m.zero());
                let v = gds_membership(&m, &datum, &fp).unwrap();
                ensure!(
                    v.closed_form == Some(v.oracle),
                    "d={d} f={f} a={a}: closed form {:?} vs oracle {}",
                    v.closed_form,
                    v.oracle
                );
                checks += 1;
                if v.oracle {
                    members.push(a);
                }
            }
            if f == "x + x^2" {
                ensure!(
                    members.len() == 1 && members[0].is_one(),
                    "d={d}: x + x^2 admits {} values of a",
                    members.len()
                );
            }
            if f == "1" && d == 2 {
                let want = [k.one(), k.from_int(-1)];
                ensure!(
                    members.len() == 2 && want.iter().all(|w| members.contains(w)),
                    "d=2 f=1 members {members:?}"
                );
            }
        }
    }
    ensure!(checks >= 96, "only {checks} checks");
    Ok(format!("{checks} closed-form/oracle checks"))
}

// 3 --------------------------------------------------------------------------

fn gds_datum(model: &Model, g: &mut Gen) -> GdsDatum {
    loop {
        if let AutParams::Gds(d) = random_automorphism(model, g).params() {
            return d.clone();
        }
    }
}

fn gds_composition() -> Outcome {
    let k = field(12);
    let surfaces = [gds(&k, 2, &["0", "1"]), gds(&k, 3, &["0", "1", "-1"])];
    let mut g = Gen::new(&k, 2024);
    for i in 0..50 {
        let m = &surfaces[i % 2];
        let (d1, d2) = (gds_datum(m, &mut g), gds_datum(m, &mut g));
        let law = gds_automorphism(m, &gds_compose_data(m, &d2, &d1).unwrap()).unwrap();
        let maps = compose(
            m,
            &gds_automorphism(m, &d2).unwrap(),
            &gds_automorphism(m, &d1).unwrap(),
        )
        .unwrap();
        ensure!(
            law.images() == maps.images(),
            "pair {i}: datum law differs from map composition"
        );
        let inv = gds_inverse_datum(m, &d1).unwrap();
        let round = gds_automorphism(m, &gds_compose_data(m, &inv, &d1).unwrap()).unwrap();
        ensure!(
            round.is_identity(),
            "pair {i}: inverse datum does not round-trip"
        );
    }
    Ok("50 seeded datum pairs; inverses round-trip".into())
}

// 4 --------------------------------------------------------------------------

fn dvcon_elements(m: &Model, ks: &[u32]) -> Vec<(&'static str, Automorphism)> {
    let k = m.context();
    let mut out = Vec::new();
    for a in k.roots_of_unity() {
        for b in k.roots_of_unity() {
            out.push(("torus", dvcon_torus(m, &[a.clone(), b]).unwrap()));
        }
    }
    out.push(("symmetry", dvcon_symmetry(m, &[0, 1]).unwrap()));
    if ks[0] == ks[1] {
        out.push(("symmetry", dvcon_symmetry(m, &[1, 0]).unwrap()));
    }
    for t in k.roots_of_unity() {
        if let Ok(q) = dvcon_quasitorus(m, &t) {
            out.push(("quasitorus", q));
        }
    }
    out
}

fn dvcon_equivalences() -> Outcome {
    let k = field(12);
    let mut checks = 0;
    for ks in [[2u32, 3], [2, 2]] {
        for p in ["z^3", "z^3 + z"] {
            let m = dvcon(&k, &ks, p);
            let mut hs = vec!["1", "y2", "y2^2 + y2 + y3"];
            if ks[0] == ks[1] {
                hs.push("y2 + y3");
            }
            let elements = dvcon_elements(&m, &ks);
            for h in hs {
                let hp = poly(&k, h, &["y2", "y3"]);
                for (kind, theta) in &elements {
                    let v = dvcon_membership(&m, theta, &hp).unwrap();
                    ensure!(
                        v.closed_form == Some(v.oracle),
                        "k={ks:?} P={p} h={h} {kind}: {:?} vs {}",
                        v.closed_form,
                        v.oracle
                    );
                    checks += 1;
                    if h == "y2^2 + y2 + y3" && *kind == "torus" {
                        ensure!(
                            v.oracle == theta.is_identity(),
                            "nontrivial torus element preserves (y2^2 + y2 + y3)D"
                        );
                    }
                }
            }
        }
    }
    ensure!(checks >= 500, "only {checks} checks");
    let m = dvcon(&k, &[2, 3], "z^3");
    let theta = dvcon_torus(&m, &[k.from_int(-1), k.one()]).unwrap();
    let alpha = exp_automorphism(&m, &canonical_derivation(&m), &m.var("y2")).unwrap();
    let z = m.var("z");
    let mono = poly(&k, "y2^3*y3^3", &["y2", "y3"]);
    let theta_alpha = theta.apply(&m, &alpha.apply(&m, &z).unwrap()).unwrap();
    let alpha_theta = alpha.apply(&m, &theta.apply(&m, &z).unwrap()).unwrap();
    ensure!(
        theta_alpha == &z - &mono && alpha_theta == &z + &mono,
        "non-commutation witness differs"
    );
    ensure!(
        in_aut(&m, &theta, &m.one()) && in_aut(&m, &alpha, &m.one()),
        "witness maps not in Aut(D)"
    );
    Ok(format!(
        "{checks} exhaustive checks; non-commutation witness reproduced"
    ))
}

// 5 --------------------------------------------------------------------------

fn dvcon_structures() -> Outcome {
    let k = field(12);
    let cases = [
        ([2u32, 3], "z^3", "((K*)^2 ⋉ (K[y2,y3], +))"),
        ([2, 3], "z^3 + z", "(((K*)^1 x Z2) ⋉ (K[y2,y3], +))"),
        ([2, 2], "z^3", "(S2 ⋉ ((K*)^2 ⋉ (K[y2,y3], +)))"),
        ([2, 2], "z^3 + z", "(S2 ⋉ (((K*)^1 x Z4) ⋉ (K[y2,y3], +)))"),
    ];
    let mut gens = 0;
    for (ks, p, want) in cases {
        let m = dvcon(&k, &ks, p);
        let got = dvcon_structure(&m, &m.one())
            .unwrap()
            .descriptor
            .map(|d| d.to_string());
        ensure!(got.as_deref() == Some(want), "k={ks:?} P={p}: {got:?}");
        for (name, theta) in structure_generators(&m, &m.one()).unwrap() {
            let v = membership(&m, &theta, &m.one()).unwrap();
            ensure!(
                v.oracle && v.closed_form != Some(false),
                "k={ks:?} P={p}: generator {name} fails membership"
            );
            gens += 1;
        }
    }
    Ok(format!("4 descriptors; {gens} generators pass membership"))
}

// 6 --------------------------------------------------------------------------

fn dvgen_checks() -> Outcome {
    let k = field(12);
    let m = dvgen(&k, &[2], 3, &["1", "y2 + 1"]);
    let mut nontrivial = 0;
    for t in k.roots_of_unity() {
        for tz in k.roots_of_unity() {
            if t.is_one() && tz.is_one() {
                continue;
            }
            let s = Scaling {
                sigma: vec![0],
                t: vec![t.clone()],
                tz,
            };
            ensure!(
                condition_one_failure(&m, &s).unwrap().is_some(),
                "condition (1) holds for t={t}"
            );
            nontrivial += 1;
        }
    }
    let spec = dvgen(&k, &[2, 2], 3, &["0", "1"]);
    let mut g = Gen::new(&k, 6);
    let mut samples = 0;
    while samples < 50 {
        let s = Scaling {
            sigma: permutation_within(&mut g, &[2, 2]),
            t: vec![g.root(), g.root()],
            tz: g.root(),
        };
        if condition_one_failure(&spec, &s).unwrap().is_some() {
            continue;
        }
        let theta = dvgen_element(&spec, &s.sigma, &s.t, &s.tz).unwrap();
        let h = if samples % 2 == 0 {
            spec.one()
        } else {
            g.kernel(&spec, 2, 2)
        };
        if h.is_zero() {
            continue;
        }
        let weight = &s.t[0].pow(2) * &s.t[1].pow(2);
        let closed = h.scale(&s.tz) == theta.apply(&spec, &h).unwrap().scale(&weight);
        let v = dvgen_membership(&spec, &theta, &h).unwrap();
        ensure!(
            closed == v.oracle && v.closed_form == Some(closed),
            "sample {samples}: closed form {closed} vs oracle {}",
            v.oracle
        );
        samples += 1;
    }
    Ok(format!(
        "{nontrivial} nontrivial elements fail condition (1); 50 specialization samples agree"
    ))
}

// 7 --------------------------------------------------------------------------

fn fm_checks() -> Outcome {
    let k = field(70);
    let m = fm(&k, 3, 4, 5, 2, 2);
    let desc = fm_structure(&m, &m.one())
        .unwrap()
        .descriptor
        .map(|d| d.to_string());
    ensure!(
        desc.as_deref() == Some("(Z70 ⋉ (R, +))"),
        "structure {desc:?}"
    );
    let hs: Vec<LaurentPoly> = ["1", "x", "z", "x + x^2"]
        .iter()
        .map(|h| poly(&k, h, &["x", "y", "z"]))
        .collect();
    let roots = k.roots_of_unity();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mus: Vec<CycScalar> = (0..49)
        .map(|_| roots[rng.random_range(0..roots.len())].clone())
        .collect();
    mus.push(k.primitive_root(10).unwrap());
    let mut flagged = 0;
    for mu in &mus {
        for (i, h) in hs.iter().enumerate() {
            let v = fm_membership(&m, mu, h).unwrap();
            ensure!(
                v.closed_form == Some(v.oracle),
                "mu={mu} h={h}: closed form {:?} vs oracle {}",
                v.closed_form,
                v.oracle
            );
            let remark_case = i == 3 && !mu.is_one() && v.oracle;
            ensure!(
                v.discrepancy == remark_case,
                "mu={mu} h={h}: discrepancy flag {}",
                v.discrepancy
            );
            if remark_case {
                ensure!(v.erratum.is_some(), "flag without erratum note");
                flagged += 1;
            }
        }
    }
    ensure!(flagged > 0, "remark case never flagged");
    Ok(format!(
        "{} checks; {flagged} remark cases flagged, oracle authoritative",
        mus.len() * hs.len()
    ))
}

// 8 --------------------------------------------------------------------------

fn dds_checks() -> Outcome {
    let k = field(12);
    let m = dds(&k, 2, 2, "y1^2", "y2^2");
    let fs = [m.one(), poly(&k, "x + x^2", &["x"])];
    let mut checks = 0;
    for lambda in k.roots_of_unity() {
        for a in k.roots_of_unity() {
            for b in [m.zero(), m.var("x")] {
                for (i, f) in fs.iter().enumerate() {
                    let v = dds_membership(&m, &lambda, &a, &b, f).unwrap();
                    ensure!(
                        v.closed_form == Some(v.oracle),
                        "λ={lambda} a={a} b={b} f={f}: closed form disagrees"
                    );
                    if i == 1 {
                        ensure!(
                            v.oracle == (lambda.is_one() && a.is_one()),
                            "λ={lambda} a={a}: x + x^2 not forcing λ = a = 1"
                        );
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} exhaustive checks"))
}

// 9 --------------------------------------------------------------------------

fn chain_rule(k: &rigidaut::FieldContext, g: &mut Gen) -> Result<(), String> {
    let names = ["a", "b", "c"];
    let n = 1 + g.below(3) as usize;
    let vars = &names[..n];
    let p = g.poly(vars, vars, 3, 3, 2);
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut g.rng);
    let images: Vec<LaurentPoly> = (0..n)
        .map(|j| {
            let e = g.below(3) as i64 + 1;
            let e = if g.coin() { e } else { -e };
            let c = g.scalar();
            LaurentPoly::term(c, Monomial::var(&Var::new(vars[perm[j]]), e))
        })
        .collect();
    let subst: HashMap<Var, LaurentPoly> = vars
        .iter()
        .map(|v| Var::new(v))
        .zip(images.iter().cloned())
        .collect();
    let composed = p.substitute(&subst).map_err(|e| e.to_string())?;
    for target in vars {
        let t = Var::new(target);
        let lhs = composed.partial(&t);
        let mut rhs = LaurentPoly::zero(k);
        for (j, v) in vars.iter().enumerate() {
            let outer = p
                .partial(&Var::new(v))
                .substitute(&subst)
                .map_err(|e| e.to_string())?;
            rhs = &rhs + &(&outer * &images[j].partial(&t));
        }
        ensure!(lhs == rhs, "chain rule fails for p={p}");
    }
    Ok(())
}

fn section_three() -> Outcome {
    let mut centralizer = 0;
    let mut equilnd = 0;
    let mut conjugation = 0;
    for (i, m) in sample_models().into_iter().enumerate() {
        let mut g = Gen::new(m.context(), 900 + i as u64);
        let d = canonical_derivation(&m);
        let mut tries = 0;
        let mut found = 0;
        while found < 10 && tries < 400 {
            tries += 1;
            let theta = random_automorphism(&m, &mut g);
            if !oracle(&m, &theta, &d).unwrap().0 {
                continue;
            }
            let f = g.kernel(&m, 2, 2);
            let (c, fixed) = centralizer_test(&m, &theta, &f, &d).unwrap();
            ensure!(
                c == fixed,
                "{}: commutes-with-Exp {c} but fixes-f {fixed}",
                m.spec()
            );
            found += 1;
        }
        centralizer += found;
        for _ in 0..10 {
            let (f, h1, h2) = (g.kernel(&m, 2, 2), g.kernel(&m, 1, 2), g.kernel(&m, 2, 2));
            if h1.is_zero() || h2.is_zero() {
                continue;
            }
            let e = exp_automorphism(&m, &delta(&m, &h1), &f).unwrap();
            ensure!(
                in_aut(&m, &e, &h2),
                "{}: Exp(f h1 D) not in Aut(h2 D)",
                m.spec()
            );
            equilnd += 1;
        }
        for _ in 0..10 {
            let phi = random_automorphism(&m, &mut g);
            let conj = conjugate_derivation(&m, &phi, &d).unwrap();
            let h = replica_factor(&m, &conj, &d).map_err(|e| format!("{}: {e}", m.spec()))?;
            ensure!(
                h.as_constant().is_some_and(|c| !c.is_zero()),
                "{}: factor {h} is not a nonzero scalar",
                m.spec()
            );
            conjugation += 1;
        }
    }
    ensure!(
        centralizer >= 50 && equilnd >= 50 && conjugation >= 50,
        "too few samples: {centralizer}/{equilnd}/{conjugation}"
    );
    let k = field(12);
    let mut g = Gen::new(&k, 31);
    for _ in 0..200 {
        chain_rule(&k, &mut g)?;
    }
    Ok(format!("{centralizer} centralizer, {equilnd} replica, {conjugation} conjugation samples; 200 chain-rule instances"))
}

// 10 -------------------------------------------------------------------------

fn exp_group_law() -> Outcome {
    let mut samples = 0;
    for (i, m) in sample_models().into_iter().enumerate() {
        let mut g = Gen::new(m.context(), 1000 + i as u64);
        let d = canonical_derivation(&m);
        for _ in 0..100 {
            let (f, h) = (g.kernel(&m, 2, 2), g.kernel(&m, 2, 2));
            let ef = exp_automorphism(&m, &d, &f).unwrap();
            let eh = exp_automorphism(&m, &d, &h).unwrap();
            let sum = exp_automorphism(&m, &d, &(&f + &h)).unwrap();
            ensure!(
                compose(&m, &ef, &eh).unwrap().images() == sum.images(),
                "{}: Exp law fails",
                m.spec()
            );
            if m.family() == Family::Fm {
                ensure!(
                    fm_plus(&m, &f).unwrap().images() == ef.images(),
                    "θ_f^+ differs from Exp(fD)"
                );
            }
            samples += 1;
        }
    }
    Ok(format!("{samples} samples over 5 families"))
}

// 11 -------------------------------------------------------------------------

fn shipped(dir: &str, name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), dir, &format!("{name}.toml")]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rigidaut"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim_end().to_string(),
    )
}

fn cli_checks() -> Outcome {
    let gds_file = shipped("varieties", "gds");
    let id = shipped("automorphisms", "identity");
    let text = std::fs::read_to_string(&gds_file).unwrap();
    let (spec, ctx) = parse_variety(&text).unwrap();
    let model = build_model(spec, &ctx).unwrap();
    let mut g = Gen::new(&ctx, 11);
    for i in 0..100 {
        let e = g.element(&model, 4, 3);
        let printed = model.display(&e);
        let (code, out) = cli(&[
            "apply",
            "--variety",
            &gds_file,
            "--aut",
            &id,
            "--element",
            &printed,
        ]);
        ensure!(
            code == 0 && out == printed,
            "round trip {i}: {printed:?} -> {out:?} (exit {code})"
        );
        ensure!(
            model.parse_element(&out).unwrap() == e,
            "round trip {i}: value changed"
        );
    }
    let fm_file = shipped("varieties", "fm");
    let star = shipped("automorphisms", "fm_star");
    let codes = [
        (
            cli(&[
                "apply",
                "--variety",
                &gds_file,
                "--aut",
                &id,
                "--element",
                "y1 +",
            ])
            .0,
            2,
        ),
        (
            cli(&[
                "apply",
                "--variety",
                &gds_file,
                "--aut",
                &star,
                "--element",
                "x",
            ])
            .0,
            3,
        ),
        (
            cli(&[
                "exp",
                "--variety",
                &gds_file,
                "--factor",
                "y1",
                "--element",
                "x",
            ])
            .0,
            4,
        ),
        (
            cli(&[
                "member",
                "--variety",
                &fm_file,
                "--aut",
                &star,
                "--factor",
                "x + x^2",
                "--strict",
            ])
            .0,
            5,
        ),
        (
            cli(&[
                "member",
                "--variety",
                &fm_file,
                "--aut",
                &star,
                "--factor",
                "x + x^2",
            ])
            .0,
            0,
        ),
    ];
    for (i, (got, want)) in codes.iter().enumerate() {
        ensure!(got == want, "exit-code case {i}: got {got}, want {want}");
    }
    for name in ["gds", "dvcon", "dvgen", "dvgen_const", "fm", "dds"] {
        let (code, _) = cli(&[
            "verify",
            "--variety",
            &shipped("varieties", name),
            "--trials",
            "100",
        ]);
        ensure!(code == 0, "verify on {name} exited {code}");
    }
    Ok("100 round trips; exit codes 0/2/3/4/5; verify passes on 6 shipped varieties".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("canonical-derivation consistency", canonical_consistency),
        ("GDS isotropy theorem", gds_theorem),
        ("GDS composition law", gds_composition),
        ("DVCon equivalences", dvcon_equivalences),
        ("DVCon structure", dvcon_structures),
        ("DVGen condition and specialization", dvgen_checks),
        ("FM isotropy", fm_checks),
        ("DDS isotropy", dds_checks),
        ("kernel, centralizer and chain-rule suite", section_three),
        ("Exp group law", exp_group_law),
        ("command-line interface", cli_checks),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
