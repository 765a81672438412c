//! Text and JSON renderings of the command outputs.

use rayon::prelude::*;
use serde_json::{json, Value};
use tvar_core::commute::{CoherencyReport, PairClass, Verdict};
use tvar_core::lattice_geometry::Constraint;
use tvar_core::oracle::{check_pair, CrossCheckReport, Labeled, OracleResult};
use tvar_core::pdivisor::{Generator, PolyDivisor, Relation};
use tvar_core::roots::{associated_cone, demazure_roots_in_box, horizontal_families, is_coherent_pair, lex_box, render_system, HorizontalFamily};
use tvar_core::{Rational, SymExpr};

use crate::format::Num;

pub fn q(x: Rational) -> Value {
    serde_json::to_value(Num::from_rational(x)).expect("serializable")
}

pub fn qvec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|&x| q(x)).collect())
}

/// Names of the unknowns of a family system: `e, s` in rank one, `a, b, s` in rank two,
/// `e1, .., en, s` otherwise.
pub fn system_names(rank: usize) -> Vec<String> {
    match rank {
        1 => vec!["e".into(), "s".into()],
        2 => vec!["a".into(), "b".into(), "s".into()],
        n => (1..=n).map(|i| format!("e{}", i)).chain(std::iter::once("s".into())).collect(),
    }
}

/// Default generator names `x1, .., xn`.
pub fn generator_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{}", i)).collect()
}

pub fn constraint_json(c: &Constraint) -> Value {
    json!({"coeffs": qvec(&c.coeffs), "relation": c.rel.symbol(), "rhs": q(c.rhs)})
}

fn vertices_json(f: &HorizontalFamily) -> Value {
    Value::Array(
        f.colored.chosen().iter().map(|(&z, v)| json!({"point": q(z), "vertex": qvec(v)})).collect(),
    )
}

/// A family with its system and the coherent pairs in the box.
fn family_json(f: &HorizontalFamily, rank: usize, b: i64) -> Value {
    let names = system_names(rank);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ray = associated_cone(&f.colored).marked_ray(&f.colored);
    let pairs: Vec<Value> = lex_box(rank, b)
        .into_iter()
        .filter_map(|e| is_coherent_pair(&f.colored, &e).ok())
        .map(|h| json!({"e": h.e, "s": h.s, "d": h.d, "ray": ray, "coloring": f.id}))
        .collect();
    json!({
        "id": f.id,
        "marked_point": q(f.colored.marked_point()),
        "vertices": vertices_json(f),
        "d": f.d,
        "system": f.system.iter().map(constraint_json).collect::<Vec<_>>(),
        "rendered": render_system(&f.system, &names),
        "pairs": pairs,
    })
}

fn family_text(f: &HorizontalFamily, rank: usize, b: i64, out: &mut String) {
    let names = system_names(rank);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let verts: Vec<String> = f
        .colored
        .chosen()
        .iter()
        .map(|(z, v)| format!("{}:[{}]", z, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    out.push_str(&format!(
        "family {} (z0 = {}, vertices {{{}}}, d = {}): {}\n",
        f.id,
        f.colored.marked_point(),
        verts.join(","),
        f.d,
        render_system(&f.system, &names).join(", ")
    ));
    for e in lex_box(rank, b) {
        if let Ok(h) = is_coherent_pair(&f.colored, &e) {
            out.push_str(&format!("  e = {:?}, s = {}\n", h.e, h.s));
        }
    }
}

pub fn roots_json(d: &PolyDivisor, b: i64) -> Value {
    let roots = demazure_roots_in_box(d.sigma(), b).unwrap_or_default();
    json!({
        "sigma_is_zero": d.sigma().is_zero(),
        "vertical_roots": roots.iter().map(|r| json!({"e": r.e, "ray": r.ray})).collect::<Vec<_>>(),
        "families": horizontal_families(d).iter().map(|f| family_json(f, d.rank(), b)).collect::<Vec<_>>(),
    })
}

pub fn roots_text(d: &PolyDivisor, b: i64) -> String {
    let mut out = String::new();
    let roots = demazure_roots_in_box(d.sigma(), b).unwrap_or_default();
    if d.sigma().is_zero() {
        out.push_str("no vertical roots (σ = {0})\n");
    } else if roots.is_empty() {
        out.push_str(&format!("no vertical roots in box {}\n", b));
    } else {
        out.push_str("vertical roots:\n");
        for r in &roots {
            out.push_str(&format!("  e = {:?}, ray = {:?}\n", r.e, r.ray));
        }
    }
    let fams = horizontal_families(d);
    out.push_str(&format!("{} horizontal families\n", fams.len()));
    for f in &fams {
        family_text(f, d.rank(), b, &mut out);
    }
    out
}

pub fn generators_json(gens: &[Generator], rels: &[Relation]) -> Value {
    let names = generator_names(gens.len());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    json!({
        "generators": gens.iter().zip(&names).map(|(g, n)| json!({"name": n, "weight": g.weight, "expr": g.expr.to_string()})).collect::<Vec<_>>(),
        "relations": rels.iter().map(|r| json!({
            "degree": r.degree(),
            "terms": r.terms.iter().map(|(c, k)| json!({"coeff": q(*c), "exponents": k})).collect::<Vec<_>>(),
            "rendered": r.render(&names),
        })).collect::<Vec<_>>(),
    })
}

pub fn generators_text(gens: &[Generator], rels: &[Relation]) -> String {
    let names = generator_names(gens.len());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut out = String::new();
    for (g, n) in gens.iter().zip(&names) {
        out.push_str(&format!("{}  weight {:?}  {}\n", n, g.weight, g.expr));
    }
    if rels.is_empty() {
        out.push_str("no relations\n");
    }
    for r in rels {
        out.push_str(&format!("{} = 0\n", r.render(&names)));
    }
    out
}

fn derivation_json(l: &Labeled) -> Value {
    json!({
        "spec": l.label,
        "type": if l.derivation.is_vertical() { "vertical" } else { "horizontal" },
        "family": l.family,
        "degree": l.derivation.degree(),
    })
}

pub fn lnds_json(d: &PolyDivisor, ders: &[Labeled], b: i64) -> Value {
    json!({
        "derivations": ders.iter().map(derivation_json).collect::<Vec<_>>(),
        "families": horizontal_families(d).iter().map(|f| family_json(f, d.rank(), b)).collect::<Vec<_>>(),
    })
}

pub fn lnds_text(d: &PolyDivisor, ders: &[Labeled]) -> String {
    let names = system_names(d.rank());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut out = String::new();
    for f in horizontal_families(d) {
        out.push_str(&format!("family {}: {}\n", f.id, render_system(&f.system, &names).join(", ")));
    }
    for l in ders {
        match l.family {
            Some(k) => out.push_str(&format!("[{}] {}\n", k, l.label)),
            None => out.push_str(&format!("[v] {}\n", l.label)),
        }
    }
    out.push_str(&format!("{} derivations\n", ders.len()));
    out
}

pub fn coherency_json(r: &CoherencyReport) -> Value {
    json!({
        "marked": [q(r.marked.0), q(r.marked.1)],
        "simple": r.simple,
        "adjacent": r.adjacent,
        "coherent": r.coherent,
        "points": r.points.iter().map(|p| json!({
            "point": q(p.point),
            "equal_vertices": p.equal_vertices,
            "first_holds": p.first_holds,
            "first_equality": p.first_equality,
            "second_holds": p.second_holds,
            "second_equality": p.second_equality,
        })).collect::<Vec<_>>(),
    })
}

pub fn oracle_json(o: &OracleResult) -> Value {
    json!({
        "commutes": o.commutes,
        "witness": o.witness.as_ref().map(|w| json!({"element": w.element.to_string(), "value": w.value.to_string()})),
    })
}

pub fn verdict_json(v: &Verdict, oracle: Option<&OracleResult>) -> Value {
    json!({
        "pair_class": v.class.as_str(),
        "criterion": v.criterion,
        "matched_case": v.hh.as_ref().and_then(|h| h.matched_case).map(|c| c.as_str()),
        "theorem": v.hh.as_ref().map(|h| h.theorem),
        "coherency_report": v.hh.as_ref().map(|h| coherency_json(&h.report)),
        "oracle": oracle.map(oracle_json),
        "agreement": oracle.map(|o| o.commutes == v.criterion),
    })
}

pub fn verdict_text(v: &Verdict, oracle: Option<&OracleResult>) -> String {
    let mut out = format!("pair class: {}\ncriterion: {}\n", v.class.as_str(), if v.criterion { "commute" } else { "do not commute" });
    if let Some(h) = &v.hh {
        out.push_str(&format!("matched case: {}\n", h.matched_case.map(|c| c.as_str()).unwrap_or("none")));
        out.push_str(&format!(
            "coherent: {}, simple: {}, adjacent: {}\n",
            h.report.coherent, h.report.simple, h.report.adjacent
        ));
    }
    if let Some(o) = oracle {
        out.push_str(&format!("oracle: {}\n", if o.commutes { "commute" } else { "do not commute" }));
        if let Some(w) = &o.witness {
            out.push_str(&format!("witness: [D1, D2]({}) = {}\n", w.element, w.value));
        }
        out.push_str(&format!("agreement: {}\n", o.commutes == v.criterion));
    }
    out
}

/// Cross-check of every unordered pair, evaluated in parallel and recorded in pair order.
pub fn cross_check_parallel(ders: &[Labeled], gens: &[SymExpr]) -> CrossCheckReport {
    let pairs: Vec<(usize, usize)> = (0..ders.len()).flat_map(|i| (i..ders.len()).map(move |j| (i, j))).collect();
    let outcomes: Vec<_> = pairs.par_iter().map(|&(i, j)| check_pair(&ders[i], &ders[j], gens)).collect();
    let mut rep = CrossCheckReport { derivations: ders.len(), ..Default::default() };
    for o in outcomes {
        rep.record(o);
    }
    rep
}

pub fn crosscheck_json(r: &CrossCheckReport) -> Value {
    let counts: serde_json::Map<String, Value> = r
        .counts
        .iter()
        .map(|(c, n)| {
            (
                c.as_str().to_string(),
                json!({"pairs": n.pairs, "commuting": n.commuting, "disagreements": n.disagreements, "theorem_mismatches": n.theorem_mismatches}),
            )
        })
        .collect();
    json!({
        "derivations": r.derivations,
        "counts": counts,
        "disagreements": r.disagreements.iter().map(|d| json!({
            "class": d.class.as_str(),
            "first": d.first,
            "second": d.second,
            "criterion": d.criterion,
            "oracle": d.oracle,
            "witness": d.witness.as_ref().map(|w| json!({"element": w.element.to_string(), "value": w.value.to_string()})),
        })).collect::<Vec<_>>(),
        "theorem_mismatches": r.theorem_mismatches.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "errors": r.errors.iter().map(|(a, b, e)| json!({"first": a, "second": b, "error": e})).collect::<Vec<_>>(),
        "clean": r.is_clean(),
    })
}

pub fn crosscheck_text(r: &CrossCheckReport) -> String {
    let mut out = format!("{} derivations\n", r.derivations);
    for c in [PairClass::VV, PairClass::VH, PairClass::HH] {
        if let Some(n) = r.counts.get(&c) {
            out.push_str(&format!(
                "{}: {} pairs, {} commuting, {} disagreements, {} theorem mismatches\n",
                c.as_str(),
                n.pairs,
                n.commuting,
                n.disagreements,
                n.theorem_mismatches
            ));
        }
    }
    for d in &r.disagreements {
        out.push_str(&format!("DISAGREE {} / {}: criterion {}, oracle {}\n", d.first, d.second, d.criterion, d.oracle));
        if let Some(w) = &d.witness {
            out.push_str(&format!("  [D1, D2]({}) = {}\n", w.element, w.value));
        }
    }
    for (a, b, e) in &r.errors {
        out.push_str(&format!("ERROR {} / {}: {}\n", a, b, e));
    }
    out.push_str(if r.is_clean() { "criterion and oracle agree on every pair\n" } else { "criterion and oracle disagree\n" });
    out
}

