mod common;

use common::{
    dds, dvcon, family_instances, field, fm, gds, random_automorphism, sample_models, Gen,
};
use proptest::prelude::*;
use rigidaut::autos::{compose, exp_automorphism, fm_star, gds_generator, GdsGenerator};
use rigidaut::isotropy::oracle;
use rigidaut::models::{
    canonical_derivation, canonical_formulas, conjugate_derivation, derive, exp_apply,
    generator_images, kernel_test, nilpotency_index, replica, replica_factor, VarietySpec,
    DEFAULT_CAP,
};
use rigidaut::{ErrorKind, LaurentPoly, Var};

#[test]
fn embeddings() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    assert_eq!(
        m.generator("y2").unwrap().to_string(),
        "x^-2*y1^2 - x^-2*y1"
    );

    let f = fm(&field(70), 3, 4, 5, 2, 2);
    assert_eq!(
        f.generator("u").unwrap(),
        &f.reduce(&f.parse_element("x^-2*(y^2*v + 1)").unwrap())
    );
    assert_eq!(
        f.reduce(&f.var("z").pow(5)),
        -&(&f.var("x").pow(3) + &f.var("y").pow(4))
    );

    let d = dds(&k, 2, 2, "y1^2", "y2^2");
    let y1 = d.var("y1");
    let expected = y1
        .pow(4)
        .mul_monomial(&rigidaut::Monomial::var(&Var::new("x"), -6));
    assert_eq!(d.generator("y3").unwrap(), &expected);
}

#[test]
fn invalid_specs() {
    let k = field(12);
    let z = |s: &str| common::poly(&k, s, &["z"]);
    for (p, ks) in [
        ("z^3", vec![1, 2]),
        ("z^3 + z^2", vec![2]),
        ("2*z^3", vec![2]),
    ] {
        let err = VarietySpec::dvcon(ks, z(p)).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Validation);
    }
    assert!(VarietySpec::fm(2, 4, 5, 2, 2).is_err());
    assert!(VarietySpec::fm(2, 3, 5, 2, 2).is_err());
    let x = |s: &str| common::poly(&k, s, &["x"]);
    assert!(VarietySpec::gds_standard(&k, 2, vec![x("1"), x("1")]).is_err());
    assert!(VarietySpec::gds_standard(&k, 1, vec![x("0"), x("1")]).is_err());
}

#[test]
fn relations_vanish() {
    for m in family_instances() {
        for r in m.relation_residues().unwrap() {
            assert!(r.is_zero(), "{}", m.id());
        }
    }
}

#[test]
fn canonical_derivations_match_formulas() {
    for m in family_instances() {
        let d = canonical_derivation(&m);
        let derived: Vec<(Var, LaurentPoly)> = generator_images(&m, &d);
        for (g, formula) in canonical_formulas(&m) {
            let got = &derived.iter().find(|(v, _)| *v == g).unwrap().1;
            assert_eq!(got, &m.reduce(&formula), "{} on {g}", m.id());
        }
        for v in m.kernel_coordinates() {
            assert!(d.image(v.name()).unwrap().is_zero());
        }
        for (g, img) in m.generators() {
            let n = nilpotency_index(&m, &d, img, DEFAULT_CAP).unwrap();
            assert!(n < DEFAULT_CAP, "{g}");
        }
    }
}

#[test]
fn canonical_derivation_examples() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let d = canonical_derivation(&m);
    let y2 = m.generator("y2").unwrap();
    assert_eq!(derive(&m, &d, y2), m.parse_element("2*y1 - 1").unwrap());
    assert_eq!(
        derive(&m, &d, &m.var("y1")),
        m.parse_element("x^2").unwrap()
    );
    assert!(derive(&m, &d, &m.var("x")).is_zero());

    let c = dvcon(&k, &[2, 3], "z^3");
    let dc = canonical_derivation(&c);
    assert_eq!(
        derive(&c, &dc, c.generator("y1").unwrap()),
        c.parse_element("3*z^2").unwrap()
    );

    let f = fm(&field(70), 3, 4, 5, 2, 2);
    let df = canonical_derivation(&f);
    assert_eq!(
        derive(&f, &df, f.generator("u").unwrap()),
        f.parse_element("y^2").unwrap()
    );
}

#[test]
fn replicas_and_kernel() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let d = canonical_derivation(&m);
    assert_eq!(replica(&m, &d, &m.one()).unwrap(), d);
    let h = m.parse_element("x + x^2").unwrap();
    let r = replica(&m, &d, &h).unwrap();
    assert_eq!(
        r.image("y1").unwrap(),
        &m.parse_element("(x + x^2)*x^2").unwrap()
    );
    assert_eq!(
        replica(&m, &d, &m.var("y1")).unwrap_err().message,
        "factor not in kernel"
    );
    assert_eq!(replica_factor(&m, &d, &d).unwrap(), m.one());
    assert_eq!(replica_factor(&m, &r, &d).unwrap(), h);
    let other = canonical_derivation(&dvcon(&k, &[2], "z^2"));
    assert!(replica_factor(&m, &other, &d).is_err());

    assert!(kernel_test(&m, &d, &m.var("x")));
    assert!(!kernel_test(&m, &d, &m.var("y1")));
    let xy = &m.var("x") * &m.var("y1");
    assert!(kernel_test(&m, &d, &(&xy - &xy)));
}

#[test]
fn nilpotency_indices() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let d = canonical_derivation(&m);
    assert_eq!(nilpotency_index(&m, &d, &m.zero(), 8).unwrap(), 0);
    assert_eq!(nilpotency_index(&m, &d, &m.var("x"), 8).unwrap(), 1);
    assert_eq!(nilpotency_index(&m, &d, &m.var("y1"), 8).unwrap(), 2);
    assert_eq!(
        nilpotency_index(&m, &d, m.generator("y2").unwrap(), 8).unwrap(),
        3
    );
    assert_eq!(
        nilpotency_index(&m, &d, &m.var("y1").pow(5), 3)
            .unwrap_err()
            .message,
        "cap exceeded"
    );
}

#[test]
fn exponentials() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let d = canonical_derivation(&m);
    let y1 = m.var("y1");
    assert_eq!(exp_apply(&m, &d, &m.zero(), &y1).unwrap(), y1);
    assert_eq!(
        exp_apply(&m, &d, &m.one(), &y1).unwrap(),
        m.parse_element("y1 + x^2").unwrap()
    );
    let y2 = m.generator("y2").unwrap();
    assert_eq!(
        exp_apply(&m, &d, &m.one(), y2).unwrap(),
        m.parse_element("y2 + 2*y1 + x^2 - 1").unwrap()
    );
    assert_eq!(
        exp_apply(&m, &d, &y1, &y1).unwrap_err().kind,
        ErrorKind::Math
    );
}

#[test]
fn conjugation_examples() {
    // φ∘D∘φ⁻¹ scales by a^d for H_a and by μ^70 for θ_μ^*; conjugating the
    // other way round gives the reciprocal factors.
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let d = canonical_derivation(&m);
    let id = rigidaut::autos::Automorphism::identity(&m);
    assert_eq!(conjugate_derivation(&m, &id, &d).unwrap(), d);
    for e in [1, 2, 3, 5] {
        let a = k.zeta_pow(e);
        let h = gds_generator(&m, &GdsGenerator::H(a.clone())).unwrap();
        let forward = replica_factor(&m, &conjugate_derivation(&m, &h, &d).unwrap(), &d).unwrap();
        assert_eq!(forward, LaurentPoly::constant(a.pow(2)));
        let back = conjugate_derivation(&m, &h.inverse(&m).unwrap(), &d).unwrap();
        assert_eq!(
            replica_factor(&m, &back, &d).unwrap(),
            LaurentPoly::constant(a.pow(-2))
        );
    }

    let k70 = field(70);
    let f = fm(&k70, 3, 4, 5, 2, 2);
    let df = canonical_derivation(&f);
    for e in [1, 3, 7] {
        let mu = k70.zeta_pow(e);
        let star = fm_star(&f, &mu).unwrap();
        let forward =
            replica_factor(&f, &conjugate_derivation(&f, &star, &df).unwrap(), &df).unwrap();
        assert_eq!(forward, LaurentPoly::constant(mu.pow(70)));
        let back = conjugate_derivation(&f, &star.inverse(&f).unwrap(), &df).unwrap();
        assert_eq!(
            replica_factor(&f, &back, &df).unwrap(),
            LaurentPoly::constant(mu.pow(-70))
        );
    }
}

#[test]
fn ring_membership() {
    let k = field(12);
    let m = gds(&k, 2, &["0", "1"]);
    let y2 = m.generator("y2").unwrap();
    assert_eq!(m.represent(y2).unwrap().to_string(), "y2");
    let bad = m
        .var("y1")
        .mul_monomial(&rigidaut::Monomial::var(&Var::new("x"), -1));
    assert_eq!(m.represent(&bad).unwrap_err().message, "not a member");
    let e = m.parse_element("x^3 + y1").unwrap();
    let rep = m.represent(&e).unwrap();
    assert_eq!(rep.to_string(), "y1 + x^3");
    assert_eq!(m.from_generators(&rep).unwrap(), e);
}

#[test]
fn kernel_images_are_monomial_units() {
    for m in sample_models() {
        let mut g = Gen::new(m.context(), 5);
        for _ in 0..20 {
            let aut = random_automorphism(&m, &mut g);
            for v in m.kernel_coordinates() {
                let img = &aut.images()[v];
                let (_, mono) = img.as_monomial_unit().expect("monomial unit");
                assert_eq!(mono.pairs().len(), 1);
                assert!(m.kernel_coordinates().contains(&mono.pairs()[0].0));
                assert_eq!(mono.pairs()[0].1, 1);
            }
        }
    }
}

#[test]
fn conjugates_are_scalar_replicas() {
    for m in sample_models() {
        let d = canonical_derivation(&m);
        let mut g = Gen::new(m.context(), 11);
        for _ in 0..10 {
            let aut = random_automorphism(&m, &mut g);
            let h = replica_factor(&m, &conjugate_derivation(&m, &aut, &d).unwrap(), &d).unwrap();
            let c = h
                .as_constant()
                .unwrap_or_else(|| panic!("{}: factor {h}", m.id()));
            assert!(!c.is_zero());
        }
    }
}

#[test]
fn replicas_commute_with_exponentials() {
    for m in sample_models() {
        let d = canonical_derivation(&m);
        let mut g = Gen::new(m.context(), 3);
        for _ in 0..10 {
            let (f, h1, h2) = (g.kernel(&m, 2, 2), g.kernel(&m, 2, 2), g.kernel(&m, 2, 2));
            if h1.is_zero() || h2.is_zero() {
                continue;
            }
            let e = exp_automorphism(&m, &replica(&m, &d, &h1).unwrap(), &f).unwrap();
            assert!(oracle(&m, &e, &replica(&m, &d, &h2).unwrap()).unwrap().0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_is_a_ring_homomorphism(seed in any::<u64>(), which in 0usize..5) {
        let m = &sample_models()[which];
        let d = canonical_derivation(m);
        let mut g = Gen::new(m.context(), seed);
        let f = g.kernel(m, 2, 2);
        let (a, b) = (g.element(m, 3, 2), g.element(m, 3, 2));
        let ex = |e: &LaurentPoly| exp_apply(m, &d, &f, e).unwrap();
        prop_assert_eq!(ex(&m.reduce(&(&a * &b))), m.reduce(&(&ex(&a) * &ex(&b))));
    }

    #[test]
    fn exp_group_law(seed in any::<u64>(), which in 0usize..5) {
        let m = &sample_models()[which];
        let d = canonical_derivation(m);
        let mut g = Gen::new(m.context(), seed);
        let (f, h) = (g.kernel(m, 3, 3), g.kernel(m, 3, 3));
        let ef = exp_automorphism(m, &d, &f).unwrap();
        let eh = exp_automorphism(m, &d, &h).unwrap();
        let sum = exp_automorphism(m, &d, &m.reduce(&(&f + &h))).unwrap();
        let both = compose(m, &ef, &eh).unwrap();
        prop_assert_eq!(both.generator_images(m).unwrap(), sum.generator_images(m).unwrap());
    }
}
