//! The full verification pipeline behind `k3lattice verify-all`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{det_exact, IntMatrix};
use crate::fibration::{analyze_k3, build_neron_severi, Kodaira, NeronSeveri, Place, Poly};
use crate::fixed_locus::{
    all_table_rows, consistent_chain_placements, count_check, fixed_locus_table, lefschetz_check,
    CurveConfiguration, PointType, K3_B2,
};
use crate::fixtures;
use crate::glue::{solve_glue, span_with_glue_index};
use crate::lattice::parse_lattice_expr;
use crate::overlattice::{enumerate_even_overlattices, enumerate_primitive_gluings};
use crate::sublattice::{half_sum_search, Index};

pub const REPORT_VERSION: &str = concat!("k3lattice ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub values: BTreeMap<String, Value>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub timestamp: String,
    pub all_passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON with the timestamp blanked, for comparing runs.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.timestamp.clear();
        r.to_json()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!("[{tag}] {} ({})\n", c.id, c.anchor));
            for (k, v) in &c.values {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("       {k} = {shown}\n"));
            }
            for f in &c.failures {
                out.push_str(&format!("       ! {f}\n"));
            }
        }
        let passed = self.checks.len() - self.failed().count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

/// Deliberate corruption for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturb {
    /// Changes one symmetric pair of entries of the NS Gram matrix.
    Gram,
}

#[derive(Default)]
struct Outcome {
    values: BTreeMap<String, Value>,
    failures: Vec<String>,
}

impl Outcome {
    fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    fn int(&mut self, key: &str, v: &BigInt) {
        self.value(key, v.to_string());
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

type CheckFn = fn(&Context, &mut Outcome) -> Result<()>;

struct Context {
    ns: Result<NeronSeveri>,
}

impl Context {
    fn ns(&self) -> Result<&NeronSeveri> {
        self.ns
            .as_ref()
            .map_err(|e| Error::Fibration(format!("NS lattice unavailable: {e}")))
    }
}

const CHECKS: [(&str, &str, CheckFn); 12] = [
    (
        "01-a15-determinant",
        "A15 Gram determinant and discriminant group",
        check_a15,
    ),
    (
        "02-ns-model-lattice",
        "invariants of U+E8+A6",
        check_model_lattice,
    ),
    ("03-k7", "K7 Gram matrix", check_k7),
    (
        "04-ast-fibres",
        "fibres of y^2 = x^3 + cbrt(-27/4) x + t^7 - 1",
        check_ast_fibres,
    ),
    (
        "05-ko-fibres",
        "fibres of y^2 = x^3 + t^3 x + t^8",
        check_ko_fibres,
    ),
    (
        "06-ns-build",
        "lattice of the I7 + II* + 7 I1 fibration",
        check_ns_build,
    ),
    (
        "07-a15-chains",
        "A15 chains in NS: Gram, primitivity, half sums",
        check_chains,
    ),
    ("08-glue", "glue vector of the A15 chain in NS", check_glue),
    (
        "09-overlattices",
        "even overlattices of A15 + <112> of index 16",
        check_overlattices,
    ),
    (
        "10-fixed-locus-table",
        "isolated fixed point counts per invariant lattice",
        check_table,
    ),
    (
        "11-lefschetz",
        "topological Lefschetz formula on every table row",
        check_lefschetz,
    ),
    (
        "12-walk",
        "local-action walk on the fibre configuration",
        check_walk,
    ),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

pub fn run_all(perturb: Option<Perturb>, timestamp: String) -> VerificationReport {
    let ns = build_neron_severi(&fixtures::ast_fibration()).and_then(|ns| match perturb {
        None => Ok(ns),
        Some(Perturb::Gram) => perturb_gram(&ns),
    });
    let ctx = Context { ns };
    let checks: Vec<Check> = CHECKS
        .iter()
        .map(|(id, anchor, f)| {
            let mut out = Outcome::default();
            if let Err(e) = f(&ctx, &mut out) {
                out.failures.push(format!("error: {e}"));
            }
            Check {
                id: id.to_string(),
                anchor: anchor.to_string(),
                status: if out.failures.is_empty() {
                    Status::Pass
                } else {
                    Status::Fail
                },
                values: out.values,
                failures: out.failures,
            }
        })
        .collect();
    VerificationReport {
        version: REPORT_VERSION.to_string(),
        timestamp,
        all_passed: checks.iter().all(|c| c.status == Status::Pass),
        checks,
    }
}

/// The first off-diagonal entry whose increment changes the determinant.
fn perturb_gram(ns: &NeronSeveri) -> Result<NeronSeveri> {
    let det = ns.lattice().det();
    let n = ns.lattice().rank();
    for i in 0..n {
        for j in i + 1..n {
            let p = ns.perturbed(i, j, 1)?;
            if p.lattice().det() != det {
                return Ok(p);
            }
        }
    }
    Err(Error::InvalidLattice(
        "no Gram entry changes the determinant".into(),
    ))
}

fn check_a15(_: &Context, o: &mut Outcome) -> Result<()> {
    let a15 = parse_lattice_expr("A15")?;
    let det = a15.det();
    o.int("det", &det);
    let disc = a15.discriminant_group()?;
    o.value("discriminant_group", disc.describe_group());
    o.expect(det.abs() == BigInt::from(16), "|det A15| = 16");
    o.expect(
        disc.is_cyclic() && disc.order() == BigInt::from(16),
        "discriminant group Z/16",
    );
    Ok(())
}

fn check_model_lattice(_: &Context, o: &mut Outcome) -> Result<()> {
    let l = parse_lattice_expr("U+E8+A6")?;
    let sig = l.signature();
    o.int("det", &l.det());
    o.value("signature", sig.to_string());
    o.value("even", l.is_even());
    o.expect(l.det().abs() == BigInt::from(7), "|det| = 7");
    o.expect(
        (sig.positive, sig.negative, sig.zero) == (1, 15, 0),
        "signature (1,15)",
    );
    o.expect(l.is_even(), "even");
    Ok(())
}

fn check_k7(_: &Context, o: &mut Outcome) -> Result<()> {
    let k7 = parse_lattice_expr("K7")?;
    o.value("gram", k7.gram().to_string());
    o.int("det", &k7.det());
    let expect = IntMatrix::from_i64_rows(&[[-4, 1], [1, -2]])?;
    o.expect(k7.gram() == &expect, "Gram [[-4,1],[1,-2]]");
    o.expect(k7.is_even(), "even");
    o.expect(k7.signature().is_negative_definite(), "negative definite");
    o.expect(k7.det().abs() == BigInt::from(7), "|det| = 7");
    Ok(())
}

fn fibre_summary(a: &crate::fibration::K3Analysis) -> Vec<Value> {
    a.fibers
        .iter()
        .map(|f| json!(format!("{} x{} at {}", f.kodaira, f.count, f.place)))
        .collect()
}

fn check_ast_fibres(_: &Context, o: &mut Outcome) -> Result<()> {
    let a = analyze_k3(&fixtures::ast_weierstrass())?;
    o.value("discriminant", a.discriminant.to_string());
    o.value("fibres", fibre_summary(&a));
    o.value("euler_sum", a.euler_sum);
    let mw = a.implied_mw_rank(16);
    o.value("implied_mw_rank", json!(mw));

    let t7_minus_2 = Poly::from_ints(&[-2, 0, 0, 0, 0, 0, 0, 1]);
    let expect_disc = &Poly::from_ints(&[0, 0, 0, 0, 0, 0, 0, -432]) * &t7_minus_2;
    o.expect(a.discriminant == expect_disc, "Δ = −432·t^7·(t^7 − 2)");
    let got: Vec<(Place, Kodaira, u32)> = a
        .fibers
        .iter()
        .map(|f| (f.place.clone(), f.kodaira, f.count))
        .collect();
    let expect = vec![
        (
            Place::Rational(BigRational::from_integer(0.into())),
            Kodaira::I(7),
            1,
        ),
        (Place::Factor(t7_minus_2), Kodaira::I(1), 7),
        (Place::Infinity, Kodaira::IIStar, 1),
    ];
    o.expect(got == expect, "I7 at 0, 7 I1 at t^7 = 2, II* at ∞");
    o.expect(a.euler_ok, "Euler sum 24");
    o.expect(mw == Some(0), "implied Mordell–Weil rank 0");
    Ok(())
}

fn check_ko_fibres(_: &Context, o: &mut Outcome) -> Result<()> {
    let a = analyze_k3(&fixtures::ko_weierstrass())?;
    o.value("discriminant", a.discriminant.to_string());
    o.value("fibres", fibre_summary(&a));
    o.value("euler_sum", a.euler_sum);
    let mw = a.implied_mw_rank(16);
    o.value("implied_mw_rank", json!(mw));
    let got: Vec<(Place, Kodaira, u32)> = a
        .fibers
        .iter()
        .map(|f| (f.place.clone(), f.kodaira, f.count))
        .collect();
    let expect = vec![
        (
            Place::Rational(BigRational::from_integer(0.into())),
            Kodaira::IIIStar,
            1,
        ),
        (
            Place::Factor(Poly::from_ints(&[4, 0, 0, 0, 0, 0, 0, 27])),
            Kodaira::I(1),
            7,
        ),
        (Place::Infinity, Kodaira::IVStar, 1),
    ];
    o.expect(got == expect, "III* at 0, 7 I1 at 4 + 27 t^7 = 0, IV* at ∞");
    o.expect(a.euler_ok, "Euler sum 24");
    o.expect(mw == Some(1), "implied Mordell–Weil rank 1");
    Ok(())
}

fn check_ns_build(ctx: &Context, o: &mut Outcome) -> Result<()> {
    let ns = ctx.ns()?;
    let l = ns.lattice();
    let sig = l.signature();
    let model = parse_lattice_expr("U+E8+A6")?;
    o.value("rank", l.rank());
    o.int("det", &l.det());
    o.value("signature", sig.to_string());
    o.value("even", l.is_even());
    o.value(
        "shioda_tate_rank",
        fixtures::ast_fibration().shioda_tate_rank(),
    );
    o.expect(l.rank() == 16, "rank 16");
    o.expect(l.det().abs() == BigInt::from(7), "|det| = 7");
    o.expect(l.det() == model.det(), "det equals det(U+E8+A6)");
    o.expect((sig.positive, sig.negative) == (1, 15), "signature (1,15)");
    o.expect(l.is_even(), "even");
    o.expect(
        l.discriminant_group()?
            .form()?
            .is_isometric(&model.discriminant_group()?.form()?)?,
        "discriminant form isometric to that of U+E8+A6",
    );
    Ok(())
}

fn check_chains(ctx: &Context, o: &mut Outcome) -> Result<()> {
    let ns = ctx.ns()?;
    let a15 = parse_lattice_expr("A15")?;
    for (name, chain) in [
        ("chain_1", fixtures::A15_CHAIN_1),
        ("chain_2", fixtures::A15_CHAIN_2),
    ] {
        o.value(name, chain.join(" "));
        let sub = match ns.extract_chain(&chain) {
            Ok(s) => s,
            Err(e) => {
                o.expect(false, format!("{name}: {e}"));
                continue;
            }
        };
        o.expect(
            sub.induced_gram() == *a15.gram(),
            format!("{name} induces the A15 Gram"),
        );
        let primitive = sub.is_primitive()?.0;
        o.value(&format!("{name}_primitive"), primitive);
        o.expect(primitive, format!("{name} primitive"));
        let halves = half_sum_search(&sub)?;
        o.value(&format!("{name}_half_sums"), halves.len());
        o.expect(
            halves.is_empty(),
            format!("{name}: no half sum of curves in NS"),
        );
    }
    Ok(())
}

fn check_glue(ctx: &Context, o: &mut Outcome) -> Result<()> {
    let ns = ctx.ns()?;
    let f = ns.class("F")?.clone();
    let ns_det = ns.lattice().det();
    for (name, chain) in [
        ("chain_1", fixtures::A15_CHAIN_1),
        ("chain_2", fixtures::A15_CHAIN_2),
    ] {
        let delta = ns.extract_chain(&chain)?;
        let g = solve_glue(&delta, Some(&f))?;
        let plus = g.plus_basis();
        let plus_det = det_exact(&(&(&plus.transpose() * ns.lattice().gram()) * &plus))?;
        let index = span_with_glue_index(&delta, &g)?;
        if name == "chain_1" {
            o.int("n", &g.n);
            o.int("H_square", &g.h_square);
            o.int("a1", g.a1());
            o.value(
                "a",
                g.residues.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            );
            o.value(
                "h_plus",
                g.h_plus.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            );
            o.value("chain_reversed", g.chain_reversed);
            o.int("det_plus_basis", &plus_det);
        }
        let a1 = g.a1() % BigInt::from(16);
        o.expect(g.n == BigInt::from(16), format!("{name}: n = 16"));
        o.expect(
            g.h_square == BigInt::from(112),
            format!("{name}: H^2 = 112"),
        );
        o.expect(
            BigInt::from(16) * &g.h_square == BigInt::from(7) * &g.n * &g.n,
            format!("{name}: 16 H^2 = 7 n^2"),
        );
        o.expect(
            g.residues_follow_chain(),
            format!("{name}: a_i = i a_1 mod n"),
        );
        o.expect(
            a1 == BigInt::from(3) || a1 == BigInt::from(13),
            format!("{name}: a_1 = ±3 mod 16"),
        );
        o.expect(
            g.representations_hold(),
            format!("{name}: n h and n h_plus representations"),
        );
        o.expect(
            plus_det == ns_det,
            format!("{name}: det Gram(C_1..C_15, h_plus) = det NS"),
        );
        o.expect(
            index == Index::Finite(1.into()),
            format!("{name}: NS = Δ + Z h"),
        );
    }
    Ok(())
}

fn check_overlattices(_: &Context, o: &mut Outcome) -> Result<()> {
    let m = parse_lattice_expr("A15+Z(112)")?;
    let index = BigInt::from(16);
    let all = enumerate_even_overlattices(&m, &index)?;
    let glued = enumerate_primitive_gluings(&m, &[15, 1], &index)?;
    o.value("even_overlattices", all.len());
    o.value("primitive_gluings", glued.len());
    o.value(
        "glue_vectors",
        glued
            .iter()
            .map(|g| {
                g.glue
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect::<Vec<_>>(),
    );
    o.expect(
        glued.len() == 2,
        "exactly 2 gluings keeping both summands primitive",
    );
    for g in &all {
        let lhs = m.det().abs();
        let rhs = &g.index * &g.index * det_exact(&g.gram)?.abs();
        o.expect(lhs == rhs, "|det M| = index^2 |det N|");
    }
    if glued.len() == 2 {
        let mut p = IntMatrix::zeros(16, 16);
        for i in 0..15 {
            p[(i, 14 - i)] = 1.into();
        }
        p[(15, 15)] = 1.into();
        o.expect(
            glued[0].transformed_span_key(&p) == glued[1].span_key()
                && glued[1].transformed_span_key(&p) == glued[0].span_key(),
            "the two gluings are swapped by C_i -> C_(16-i)",
        );
    }
    Ok(())
}

fn check_table(_: &Context, o: &mut Outcome) -> Result<()> {
    let expect = [(2, 1, 0), (2, 1, 0), (4, 3, 1), (4, 3, 1), (6, 5, 2)];
    let sums = [3, 3, 8, 8, 13];
    for ((row, e), s) in all_table_rows().iter().zip(expect).zip(sums) {
        let got = (row.n26, row.n35, row.n44);
        o.value(
            &row.invariant_lattice,
            format!(
                "r={} points={got:?} total={}",
                row.rank,
                row.isolated_points()
            ),
        );
        o.expect(got == e, format!("{}: counts {e:?}", row.invariant_lattice));
        o.expect(
            row.isolated_points() == s,
            format!("{}: {s} isolated points", row.invariant_lattice),
        );
    }
    Ok(())
}

fn check_lefschetz(_: &Context, o: &mut Outcome) -> Result<()> {
    for row in all_table_rows() {
        let t = K3_B2 - row.rank;
        let ok = lefschetz_check(&row, t);
        o.value(
            &row.invariant_lattice,
            format!(
                "chi={} 2+r-t/6={}",
                row.euler(),
                2 + row.rank as i64 - (t / 6) as i64
            ),
        );
        o.expect(ok, format!("{}: Lefschetz", row.invariant_lattice));
    }
    Ok(())
}

fn check_walk(ctx: &Context, o: &mut Outcome) -> Result<()> {
    let ns = ctx.ns()?;
    let config = CurveConfiguration::from_neron_severi(ns, &fixtures::AST_FIXED_CURVES)?;
    let walk = config.walk();
    let c = walk.counts();
    o.value("n26", c.n26);
    o.value("n35", c.n35);
    o.value("n44", c.n44);
    o.value("fixed_curves", walk.fixed_curves.clone());
    o.value("conflicts", walk.conflicts.clone());
    o.expect(walk.is_consistent(), "walk consistent");
    fn sorted(mut v: Vec<&str>) -> Vec<&str> {
        v.sort();
        v
    }
    for (kind, expect) in [
        (PointType::P26, fixtures::AST_P26.to_vec()),
        (PointType::P35, fixtures::AST_P35.to_vec()),
        (PointType::P44, fixtures::AST_P44.to_vec()),
    ] {
        o.expect(
            sorted(walk.locations(kind)) == sorted(expect),
            format!("{kind} placement"),
        );
    }
    o.expect(
        walk.fixed_curves == fixtures::AST_FIXED_CURVES,
        "fixed curves Γ7 and Θ6",
    );
    let row = fixed_locus_table("U+E8+A6")?;
    o.expect(count_check(&walk, &row), "counts match the U+E8+A6 row");

    let placements = consistent_chain_placements(15)?;
    o.value(
        "chain_placements",
        placements
            .iter()
            .map(|p| format!("{p:?}"))
            .collect::<Vec<_>>(),
    );
    o.expect(
        !placements.is_empty()
            && placements
                .iter()
                .all(|p| p.len() >= 2 && p.windows(2).all(|w| w[1] - w[0] == 7)),
        "consistent 15-chain placements are exactly 7 apart",
    );
    Ok(())
}
