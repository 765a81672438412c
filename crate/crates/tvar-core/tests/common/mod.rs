#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tvar_core::lattice_geometry::linalg::to_q;
use tvar_core::lnd::Derivation;
use tvar_core::oracle::enumerate_derivations;
use tvar_core::pdivisor::PolyDivisor;
use tvar_core::{Cone, Polyhedron, RatFun, Rational, SymExpr};

/// `[0, 1] * {0}` on a rank-one lattice with `sigma = {0}`.
pub fn line() -> PolyDivisor {
    let seg = Polyhedron::new(vec![to_q(&[0]), to_q(&[1])], Cone::zero(1)).unwrap();
    PolyDivisor::new(Cone::zero(1), [(Rational::ZERO, seg)].into_iter().collect()).unwrap()
}

/// Triangle at `0` and segment at `1` with `sigma = {0}` in rank two.
pub fn surface() -> PolyDivisor {
    let tri = Polyhedron::new(
        vec![to_q(&[0, 0]), to_q(&[0, 1]), vec![Rational::new(-1, 4), Rational::from(-1)]],
        Cone::zero(2),
    )
    .unwrap();
    let seg = Polyhedron::new(vec![to_q(&[0, 0]), to_q(&[0, 1])], Cone::zero(2)).unwrap();
    PolyDivisor::new(Cone::zero(2), [(Rational::ZERO, tri), (Rational::ONE, seg)].into_iter().collect()).unwrap()
}

/// The positive orthant with `conv{(1,0),(0,1)} + sigma` at `0`.
pub fn orthant_instance() -> PolyDivisor {
    let seg = Polyhedron::new(vec![to_q(&[1, 0]), to_q(&[0, 1])], Cone::orthant(2)).unwrap();
    PolyDivisor::new(Cone::orthant(2), [(Rational::ZERO, seg)].into_iter().collect()).unwrap()
}

pub fn line_generators() -> Vec<SymExpr> {
    vec![SymExpr::chi(vec![1]), SymExpr::homogeneous(RatFun::t(), vec![-1])]
}

pub fn surface_generators() -> Vec<SymExpr> {
    let t = RatFun::t();
    vec![
        SymExpr::homogeneous(t.clone(), vec![4, 0]),
        SymExpr::chi(vec![-1, 0]),
        SymExpr::chi(vec![-4, 1]),
        SymExpr::homogeneous(t.mul(&RatFun::linear_power(Rational::ONE, 1)), vec![8, -1]),
    ]
}

pub struct Instance {
    pub name: &'static str,
    pub divisor: PolyDivisor,
    pub derivations: Vec<Derivation>,
    pub generators: Vec<SymExpr>,
}

/// The three test varieties with their derivations in a small box.
pub fn instances() -> Vec<Instance> {
    let mk = |name, divisor: PolyDivisor, b, generators| {
        let derivations = enumerate_derivations(&divisor, b).into_iter().map(|l| l.derivation).collect();
        Instance { name, divisor, derivations, generators }
    };
    let o = orthant_instance();
    let og = o.find_generators(3).into_iter().map(|g| g.expr).collect();
    vec![
        mk("line", line(), 3, line_generators()),
        mk("surface", surface(), 2, surface_generators()),
        mk("orthant", o, 2, og),
    ]
}

/// Runner seeded from `TVAR_LND_SEED` (default `0`).
pub fn runner(cases: u32) -> TestRunner {
    let seed: u64 = std::env::var("TVAR_LND_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

/// `c * t^a * (t-1)^b * (t+2)^k * X^m`.
pub fn term(c: i64, a: i64, b: i64, k: i64, m: Vec<i64>) -> SymExpr {
    let f = RatFun::constant(Rational::from(c))
        .mul(&RatFun::linear_power(Rational::ZERO, a))
        .mul(&RatFun::linear_power(Rational::ONE, b))
        .mul(&RatFun::linear_power(Rational::from(-2), k));
    SymExpr::homogeneous(f, m)
}

pub fn shifts_map(entries: &[(i64, Vec<i64>)]) -> BTreeMap<Rational, Vec<i64>> {
    entries.iter().map(|(z, v)| (Rational::from(*z), v.clone())).collect()
}
