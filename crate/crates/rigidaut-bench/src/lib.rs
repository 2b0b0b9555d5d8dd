//! Fixtures shared by the benchmarks.

use rigidaut::autos::{fm_star, gds_automorphism, Automorphism, GdsDatum};
use rigidaut::exactalg::{parse_poly, Roster};
use rigidaut::models::{build_model, parse_variety, Model};
use rigidaut::{cyclotomic_context, CycScalar, FieldContext, LaurentPoly};

pub const GDS: &str = "family = \"gds\"\nd = 2\nsigma = [\"0\", \"1\"]\n";
pub const DVCON: &str = "family = \"dvcon\"\nm = 3\nk = [2, 2]\np = \"z^3 + z\"\n";
pub const FM: &str = "family = \"fm\"\ncyclotomic_order = 70\na = 3\nb = 4\nc = 5\nm = 2\nn = 2\n";
pub const DDS: &str = "family = \"dds\"\nd1 = 2\nd2 = 2\np1 = \"y1^2\"\np2 = \"y2^2\"\n";

pub fn model(text: &str) -> Model {
    let (spec, k) = parse_variety(text).expect("fixture parses");
    build_model(spec, &k).expect("fixture builds")
}

pub fn field(n: u64) -> FieldContext {
    cyclotomic_context(n).expect("valid conductor")
}

/// A dense-ish scalar `Σ (i+1)·ζ^i`.
pub fn dense_scalar(k: &FieldContext) -> CycScalar {
    (0..k.degree() as i64).fold(k.zero(), |acc, i| {
        &acc + &(&k.from_int(i + 1) * &k.zeta_pow(i))
    })
}

pub fn poly(k: &FieldContext, text: &str, vars: &[&str]) -> LaurentPoly {
    parse_poly(text, &Roster::plain(vars), k).expect("fixture parses")
}

/// `(a + b + c + 1)^n` with `a, b, c` the given variables.
pub fn power_sum(k: &FieldContext, vars: [&str; 3], n: u32) -> LaurentPoly {
    let text = format!("{} + {} + {} + 1", vars[0], vars[1], vars[2]);
    poly(k, &text, &vars).pow(n)
}

/// `(id, 1, -1, x + 1)` on the GDS fixture.
pub fn gds_aut(m: &Model) -> Automorphism {
    let k = m.context();
    let id = GdsDatum::identity(m);
    let b = poly(k, "x + 1", &["x"]);
    gds_automorphism(m, &GdsDatum::new(id.alpha, k.one(), k.from_int(-1), b)).expect("valid datum")
}

pub fn fm_aut(m: &Model) -> Automorphism {
    fm_star(m, &m.context().primitive_root(10).expect("ζ10 in Q(ζ70)")).expect("valid μ")
}
