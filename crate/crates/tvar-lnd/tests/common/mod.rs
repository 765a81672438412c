#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use tvar_core::lnd::Derivation;
use tvar_core::pdivisor::{Generator, PolyDivisor, Relation};
use tvar_core::roots::{horizontal_families, is_coherent_pair, render_system};
use tvar_core::{RatFun, Rational, SymExpr};
use tvar_lnd::action::ActionImage;
use tvar_lnd::format::parse_divisor;
use tvar_lnd::spec::parse_derivation;

pub fn line_divisor() -> PolyDivisor {
    parse_divisor(include_str!("../../data/line.json")).unwrap()
}

pub fn hypersurface_divisor() -> PolyDivisor {
    parse_divisor(include_str!("../../data/hypersurface.json")).unwrap()
}

pub fn orthant_divisor() -> PolyDivisor {
    parse_divisor(include_str!("../../data/orthant.json")).unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

/// `u1 = -t X^(4,0)`, `u2 = X^(-1,0)`, `u3 = -X^(-4,1)`, `u4 = t(t-1) X^(8,-1)`.
pub fn u_generators() -> Vec<Generator> {
    let t = RatFun::t();
    let gen = |weight: Vec<i64>, f: RatFun| Generator { expr: SymExpr::homogeneous(f, weight.clone()), weight };
    vec![
        gen(vec![4, 0], t.neg()),
        gen(vec![-1, 0], RatFun::one()),
        gen(vec![-4, 1], RatFun::constant(q(-1))),
        gen(vec![8, -1], t.mul(&RatFun::linear_power(Rational::ONE, 1))),
    ]
}

/// `u1 + u1^2 u2^4 + u3 u4 = 0`.
pub fn u_relation() -> Relation {
    Relation { terms: vec![(q(1), vec![1, 0, 0, 0]), (q(1), vec![2, 4, 0, 0]), (q(1), vec![0, 0, 1, 1])] }
}

/// Whether a relation among `gens`, rewritten in the coordinates `u`, is a multiple of
/// [`u_relation`]. Each generator must be `+-u_i`.
pub fn proportional_to_u_relation(rel: &Relation, gens: &[Generator], u: &[Generator]) -> bool {
    in_u_coordinates(rel, gens, u).is_some_and(|mut terms| {
        let lead = terms.iter().find(|(_, e)| e.iter().sum::<u32>() == 1).map(|(c, _)| *c);
        let Some(lead) = lead else { return false };
        for t in &mut terms {
            t.0 = t.0 / lead;
        }
        let mut want = u_relation().terms;
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        want.sort_by(|a, b| a.1.cmp(&b.1));
        terms == want
    })
}

/// Rewrites a relation among `gens` in the coordinates `u`, when each generator is `+-u_i`.
pub fn in_u_coordinates(rel: &Relation, gens: &[Generator], u: &[Generator]) -> Option<Vec<(Rational, Vec<u32>)>> {
    let mut image = Vec::new();
    for g in gens {
        let (i, sign) = u.iter().enumerate().find_map(|(i, ui)| {
            if ui.expr == g.expr {
                Some((i, q(1)))
            } else if ui.expr.neg() == g.expr {
                Some((i, q(-1)))
            } else {
                None
            }
        })?;
        image.push((i, sign));
    }
    let mut terms: Vec<(Rational, Vec<u32>)> = rel
        .terms
        .iter()
        .map(|(c, k)| {
            let mut e = vec![0; u.len()];
            let mut c = *c;
            for (&(i, sign), &p) in image.iter().zip(k) {
                e[i] += p;
                c *= sign.pow(p);
            }
            (c, e)
        })
        .collect();
    terms.sort_by(|a, b| a.1.cmp(&b.1));
    Some(terms)
}

/// Systems of the four colored families, all marked at 0. The chosen vertices at 0 and 1
/// are (0,0),(0,0) for (1); (0,1),(0,1) for (2); (-1/4,-1),(0,0) for (3); (-1/4,-1),(0,1)
/// for (4). The binding bound of (3) is `a + 4b >= 1` and that of (4) is `a + 8b >= 1`.
pub fn family_systems() -> [(usize, [&'static str; 3]); 4] {
    [
        (1, ["s = -1", "a + 4b <= -4", "b >= 1"]),
        (2, ["b + s = -1", "a + 8b <= -4", "b <= -1"]),
        (3, ["a + 4b - 4s = 1", "a + 4b >= 1", "b >= 1"]),
        (4, ["a + 4b - 4s = 1", "a + 8b >= 1", "b <= -1"]),
    ]
}

/// Family id to its number in the presentation above, matched by system.
pub fn family_numbering(d: &PolyDivisor) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for fam in horizontal_families(d) {
        let got: BTreeSet<String> = render_system(&fam.system, &["a", "b", "s"]).into_iter().collect();
        for (n, sys) in family_systems() {
            if got == sys.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>() {
                out.insert(fam.id, n);
            }
        }
    }
    out
}

/// Member of family `n` (numbered by system) with weight `e`.
pub fn member(d: &PolyDivisor, n: usize, e: [i64; 2]) -> Derivation {
    let numbering = family_numbering(d);
    let fam = horizontal_families(d).into_iter().find(|f| numbering[&f.id] == n).unwrap();
    Derivation::horizontal(is_coherent_pair(&fam.colored, &e).unwrap())
}

/// Members of families (1) and (3) with `a1 + 4 b1 = -4` and `a3 + 4 b3 = 1`.
pub fn family_pair_13(d: &PolyDivisor, b1: i64, b3: i64) -> (Derivation, Derivation) {
    let first = format!("horizontal:z0=0;vertices={{0:[0,0],1:[0,0]}};e=[{},{}]", -4 - 4 * b1, b1);
    let second = format!("horizontal:z0=0;vertices={{0:[-1/4,-1],1:[0,0]}};e=[{},{}]", 1 - 4 * b3, b3);
    (parse_derivation(d, &first).unwrap(), parse_derivation(d, &second).unwrap())
}

pub const B1: u32 = 1;
pub const B3: u32 = 2;

/// Polynomial in `x1..x4, lambda, mu`, keyed by exponent vector.
pub type Poly6 = BTreeMap<[u32; 6], Rational>;

pub fn var(i: usize) -> Poly6 {
    let mut e = [0; 6];
    e[i] = 1;
    [(e, q(1))].into()
}

pub fn constant(c: Rational) -> Poly6 {
    [([0; 6], c)].into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn add(a: &Poly6, b: &Poly6) -> Poly6 {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert(q(0)) += *c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn scale(a: &Poly6, c: Rational) -> Poly6 {
    a.iter().map(|(e, x)| (*e, *x * c)).filter(|(_, x)| !x.is_zero()).collect()
}

pub fn mul(a: &Poly6, b: &Poly6) -> Poly6 {
    let mut out = Poly6::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: [u32; 6] = std::array::from_fn(|i| ea[i] + eb[i]);
            *out.entry(e).or_insert(q(0)) += *ca * *cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn pow(a: &Poly6, k: u32) -> Poly6 {
    (0..k).fold(constant(q(1)), |p, _| mul(&p, a))
}

/// Divides by `x3`; every term must contain it.
pub fn div_x3(a: &Poly6) -> Poly6 {
    a.iter()
        .map(|(e, c)| {
            assert!(e[2] > 0, "not divisible by x3");
            let mut e = *e;
            e[2] -= 1;
            (e, *c)
        })
        .collect()
}

/// Image of `x_{i+1}` under `x1 -> x1 + lambda x3^b1`, `x2 -> x2 + mu x3^b3`, `x3 -> x3`,
/// with `x4 = -(x1 + x1^2 x2^4) / x3` carried along.
pub fn substitution_image(i: usize, b1: u32, b3: u32) -> Poly6 {
    substitution_image_scaled(i, b1, b3, Rational::ONE, Rational::ONE)
}

/// As [`substitution_image`] with `lambda` and `mu` scaled by `c1` and `c2`.
pub fn substitution_image_scaled(i: usize, b1: u32, b3: u32, c1: Rational, c2: Rational) -> Poly6 {
    let x3 = var(2);
    let big_x1 = add(&var(0), &scale(&mul(&var(4), &pow(&x3, b1)), c1));
    let big_x2 = add(&var(1), &scale(&mul(&var(5), &pow(&x3, b3)), c2));
    let f = |a: &Poly6, b: &Poly6| add(a, &mul(&pow(a, 2), &pow(b, 4)));
    match i {
        0 => big_x1,
        1 => big_x2,
        2 => x3,
        _ => add(&var(3), &scale(&div_x3(&add(&f(&big_x1, &big_x2), &scale(&f(&var(0), &var(1)), q(-1)))), q(-1))),
    }
}

/// The closed form commonly quoted for the image of `x4`, coefficients as given there.
pub fn quoted_x4_image(b1: u32, b3: u32) -> ActionImage {
    let mono = |c: Rational, x: [u32; 4]| (c, x.to_vec());
    let mut terms = BTreeMap::new();
    terms.insert((0, 0), vec![mono(q(1), [0, 0, 0, 1])]);
    terms.insert((0, 1), vec![mono(q(-4), [2, 3, b3 - 1, 0])]);
    terms.insert((1, 0), vec![mono(q(-2), [1, 4, b1 - 1, 0]), mono(q(-1), [0, 0, b1 - 1, 0])]);
    terms.insert((1, 1), vec![mono(q(-8), [1, 3, b1 - 1 + b3, 0])]);
    terms.insert((1, 2), vec![mono(q(-12), [1, 2, b1 - 1 + 2 * b3, 0])]);
    terms.insert((1, 3), vec![mono(q(-4), [1, 1, b1 - 1 + 3 * b3, 0])]);
    terms.insert((1, 4), vec![mono(Rational::new(-1, 6), [1, 0, b1 - 1 + 4 * b3, 0])]);
    ActionImage { generator: 3, terms }
}

pub fn to_poly6(img: &ActionImage) -> Poly6 {
    let mut out = Poly6::new();
    for (&(k, j), p) in &img.terms {
        for (c, e) in p {
            let key = [e[0], e[1], e[2], e[3], k, j];
            *out.entry(key).or_insert(q(0)) += *c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn render_monomial(e: &[u32; 6]) -> String {
    let names = ["x1", "x2", "x3", "x4", "lambda", "mu"];
    let order = [4, 5, 0, 1, 2, 3];
    let parts: Vec<String> = order
        .iter()
        .filter(|&&i| e[i] > 0)
        .map(|&i| if e[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], e[i]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Monomials whose coefficients differ, as `monomial: ours vs theirs`.
pub fn differences(ours: &Poly6, theirs: &Poly6) -> Vec<String> {
    let keys: BTreeSet<([u32; 2], &[u32; 6])> = ours.keys().chain(theirs.keys()).map(|k| ([k[4], k[5]], k)).collect();
    let zero = q(0);
    keys.into_iter()
        .map(|(_, k)| k)
        .filter_map(|k| {
            let (a, b) = (ours.get(k).unwrap_or(&zero), theirs.get(k).unwrap_or(&zero));
            (a != b).then(|| format!("{}: {} vs {}", render_monomial(k), a, b))
        })
        .collect()
}
