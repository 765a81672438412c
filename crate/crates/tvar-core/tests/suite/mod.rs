//! Property suites shared by the `properties` and `acceptance` targets.

use crate::common::*;
use proptest::prelude::*;
use tvar_core::commute::{
    associated_system, commutator, criterion_hh, criterion_vv, vv_coefficient,
};
use tvar_core::lattice_geometry::linalg::to_q;
use tvar_core::lnd::{exponentiate, nilpotency_degree, Derivation, DEFAULT_CAP};
use tvar_core::oracle::{lemma_ratfun_test, oracle_commutes};
use tvar_core::roots::{enumerate_horizontal, is_coherent_pair};
use tvar_core::{Cone, Polyhedron, RatFun, Rational, SymExpr};

fn term_strategy(rank: usize) -> impl Strategy<Value = SymExpr> {
    (
        (-3i64..=3).prop_filter("nonzero", |c| *c != 0),
        -2i64..=2,
        -1i64..=2,
        -1i64..=1,
        proptest::collection::vec(-3i64..=3, rank),
    )
        .prop_map(|(c, a, b, k, m)| term(c, a, b, k, m))
}

/// (instance, first, second, x, y) with indices taken modulo the pool sizes.
fn pick() -> impl Strategy<Value = (usize, usize, usize, SymExpr, SymExpr)> {
    (0usize..3, any::<usize>(), any::<usize>(), term_strategy(2), term_strategy(2))
}

fn fit(x: &SymExpr, rank: usize) -> SymExpr {
    let mut out = SymExpr::zero();
    for (m, f) in x.parts() {
        out = out.add(&SymExpr::homogeneous(f.clone(), m[..rank].to_vec()));
    }
    out
}

pub fn leibniz_rule() {
    let inst = instances();
    runner(200)
        .run(&pick(), |(k, i, _, x, y)| {
            let ins = &inst[k];
            let d = &ins.derivations[i % ins.derivations.len()];
            let n = ins.divisor.rank();
            let (x, y) = (fit(&x, n), fit(&y, n));
            let lhs = d.apply(&x.mul(&y));
            let rhs = d.apply(&x).mul(&y).add(&x.mul(&d.apply(&y)));
            prop_assert_eq!(lhs, rhs, "{} {}", ins.name, d);
            Ok(())
        })
        .unwrap();
}

pub fn homogeneity_degree() {
    let inst = instances();
    runner(200)
        .run(&pick(), |(k, i, _, x, _)| {
            let ins = &inst[k];
            let d = &ins.derivations[i % ins.derivations.len()];
            let x = fit(&x, ins.divisor.rank());
            let (m, _) = x.as_homogeneous().unwrap();
            let out = d.apply(&x);
            if !out.is_zero() {
                let (w, _) = out.as_homogeneous().expect("homogeneous image");
                let want: Vec<i64> = m.iter().zip(d.degree()).map(|(a, b)| a + b).collect();
                prop_assert_eq!(w, &want);
            }
            Ok(())
        })
        .unwrap();
}

pub fn commutator_antisymmetry() {
    let inst = instances();
    runner(200)
        .run(&pick(), |(k, i, j, x, _)| {
            let ins = &inst[k];
            let a = &ins.derivations[i % ins.derivations.len()];
            let b = &ins.derivations[j % ins.derivations.len()];
            let x = fit(&x, ins.divisor.rank());
            prop_assert_eq!(commutator(a, b, &x), commutator(b, a, &x).neg());
            Ok(())
        })
        .unwrap();
}

pub fn nilpotent_on_generators() {
    for ins in instances() {
        for d in &ins.derivations {
            for g in &ins.generators {
                let n = nilpotency_degree(d, g, DEFAULT_CAP);
                assert!(n.is_ok(), "{}: {} on {}", ins.name, d, g);
            }
        }
    }
}

/// A product of generators, `g_i^a * g_j^b`, scaled by `c`.
fn algebra_element(gens: &[SymExpr], i: usize, j: usize, a: u32, b: u32, c: i64, rank: usize) -> SymExpr {
    let gi = &gens[i % gens.len()];
    let gj = &gens[j % gens.len()];
    gi.pow(a, rank).mul(&gj.pow(b, rank)).scale(Rational::from(c))
}

pub fn exponential_is_a_homomorphism_and_a_group() {
    let inst = instances();
    let strat = (
        0usize..3,
        any::<usize>(),
        (any::<usize>(), any::<usize>(), 0u32..3, 0u32..3),
        (any::<usize>(), 0u32..3),
        (-3i64..=3, -3i64..=3),
    );
    runner(60)
        .run(&strat, |(k, i, (g1, g2, a, b), (g3, c), (lam, mu))| {
            let ins = &inst[k];
            let n = ins.divisor.rank();
            let d = &ins.derivations[i % ins.derivations.len()];
            let x = algebra_element(&ins.generators, g1, g2, a, b, 1, n);
            let y = algebra_element(&ins.generators, g3, g1, c, 1, -2, n).add(&x);
            let (l, m) = (Rational::from(lam), Rational::from(mu));
            let e = |r: Rational, z: &SymExpr| exponentiate(d, r, z, DEFAULT_CAP).unwrap();
            prop_assert_eq!(e(l, &x.mul(&y)), e(l, &x).mul(&e(l, &y)));
            prop_assert_eq!(e(l, &e(m, &x)), e(l + m, &x));
            prop_assert_eq!(e(Rational::ZERO, &x), x);
            Ok(())
        })
        .unwrap();
}

fn polytope() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 1..5)
}

pub fn support_function_is_additive() {
    runner(200)
        .run(&(polytope(), polytope(), proptest::collection::vec(-4i64..=4, 2), any::<bool>()), |(p, q, m, orth)| {
            let cone = if orth { Cone::orthant(2) } else { Cone::zero(2) };
            let m: Vec<i64> = if orth { m.iter().map(|x| x.abs()).collect() } else { m };
            let pp = Polyhedron::new(p.iter().map(|v| to_q(v)).collect(), cone.clone()).unwrap();
            let qq = Polyhedron::new(q.iter().map(|v| to_q(v)).collect(), cone).unwrap();
            let s = pp.minkowski_sum(&qq).unwrap();
            prop_assert_eq!(
                s.support_lattice(&m).unwrap(),
                pp.support_lattice(&m).unwrap() + qq.support_lattice(&m).unwrap()
            );
            Ok(())
        })
        .unwrap();
}

pub fn rational_function_lemma_exhaustive() {
    let pts = [Rational::ZERO, Rational::ONE, Rational::new(-5, 2)];
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                let co = [Rational::from(a), Rational::from(b), Rational::from(c)];
                let sum = pts
                    .iter()
                    .zip(&co)
                    .fold(RatFun::zero(), |acc, (&z, &k)| acc.add(&RatFun::linear_power(z, -1).scale(k)));
                let constant = sum.as_constant();
                let fast = lemma_ratfun_test(&pts, &co).unwrap();
                assert_eq!(fast, constant.is_some(), "{:?}", co);
                assert_eq!(fast, a == 0 && b == 0 && c == 0);
                if let Some(v) = constant {
                    assert!(v.is_zero());
                }
            }
        }
    }
}

pub fn vv_coefficient_is_linear() {
    let ins = &instances()[2];
    let vs: Vec<_> = ins
        .derivations
        .iter()
        .filter_map(|d| match d {
            Derivation::Vertical(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    assert!(!vs.is_empty());
    let strat = (any::<usize>(), any::<usize>(), proptest::collection::vec(-5i64..=5, 2), proptest::collection::vec(-5i64..=5, 2));
    runner(200)
        .run(&strat, |(i, j, m1, m2)| {
            let (a, b) = (&vs[i % vs.len()], &vs[j % vs.len()]);
            let sum: Vec<i64> = m1.iter().zip(&m2).map(|(x, y)| x + y).collect();
            prop_assert_eq!(vv_coefficient(a, b, &sum), vv_coefficient(a, b, &m1) + vv_coefficient(a, b, &m2));
            if criterion_vv(a, b) {
                prop_assert_eq!(vv_coefficient(a, b, &m1), 0);
            }
            Ok(())
        })
        .unwrap();
}

pub fn horizontal_kernel_elements_are_killed() {
    for ins in instances() {
        for d in &ins.derivations {
            for m in tvar_core::roots::lex_box(ins.divisor.rank(), 3) {
                if let Some(k) = d.kernel_element(&m) {
                    assert!(d.apply(&k).is_zero(), "{} {:?}", d, m);
                    assert!(d.kernel_membership(&k.scale(Rational::from(7))));
                }
            }
        }
    }
}

pub fn associated_phi_is_multiplicative() {
    let d = surface();
    let hs = enumerate_horizontal(&d, 2);
    let strat = (any::<usize>(), any::<usize>(), proptest::collection::vec(-6i64..=6, 2), proptest::collection::vec(-6i64..=6, 2));
    runner(100)
        .run(&strat, |(i, j, m1, m2)| {
            let sys = associated_system(&hs[i % hs.len()].1, &hs[j % hs.len()].1).unwrap();
            let sum: Vec<i64> = m1.iter().zip(&m2).map(|(x, y)| x + y).collect();
            prop_assert_eq!(sys.phi(&m1).mul(&sys.phi(&m2)), sys.phi(&sum));
            Ok(())
        })
        .unwrap();
}

pub fn shift_invariance() {
    let cases = [(surface(), surface_generators(), 2i64), (line(), line_generators(), 1)];
    for (d, gens, rank) in cases {
        let hs = enumerate_horizontal(&d, 2);
        let vec_strat = proptest::collection::vec(-2i64..=2, rank as usize);
        let strat = (any::<usize>(), any::<usize>(), vec_strat.clone(), vec_strat.clone(), vec_strat);
        runner(40)
            .run(&strat, |(i, j, w0, w1, w2)| {
                let (a, b) = (&hs[i % hs.len()].1, &hs[j % hs.len()].1);
                let shifts = shifts_map(&[(0, w0), (1, w1), (2, w2)]);
                let (ca, sh) = a.colored.shift(&shifts).unwrap();
                let (cb, _) = b.colored.shift(&shifts).unwrap();
                let a2 = is_coherent_pair(&ca, &a.e).unwrap();
                let b2 = is_coherent_pair(&cb, &b.e).unwrap();
                prop_assert_eq!(criterion_hh(a, b).unwrap().criterion, criterion_hh(&a2, &b2).unwrap().criterion);
                let (da, db) = (Derivation::horizontal(a.clone()), Derivation::horizontal(b.clone()));
                let (da2, db2) = (Derivation::horizontal(a2), Derivation::horizontal(b2));
                for g in &gens {
                    prop_assert_eq!(sh.forward(&da.apply(g)), da2.apply(&sh.forward(g)));
                }
                let moved: Vec<SymExpr> = gens.iter().map(|g| sh.forward(g)).collect();
                let mut reversed = moved.clone();
                reversed.reverse();
                let o1 = oracle_commutes(&da, &db, &gens).commutes;
                prop_assert_eq!(o1, oracle_commutes(&da2, &db2, &moved).commutes);
                prop_assert_eq!(o1, oracle_commutes(&da2, &db2, &reversed).commutes);
                Ok(())
            })
            .unwrap();
    }
}
