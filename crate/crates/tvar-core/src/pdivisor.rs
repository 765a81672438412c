//! Polyhedral divisors on the affine line and the graded algebras they define.
//!
//! For `D = sum Delta_z * z` the weight space `A_m` is `f_min(m) * Q[t]` with
//! `f_min(m) = prod (t - z)^ceil(-h_z(m))`. Generators are found inside a box of
//! weights by tracking, for every weight, the smallest power of each `(t - z)` that
//! products of candidate generators can reach.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::lattice_geometry::linalg::{self, dot_zq, to_q, QVec};
use crate::lattice_geometry::{Cone, GeometryError, Polyhedron};
use crate::rational::Rational;
use crate::symexpr::{Poly, RatFun, SymExpr};

/// A rational divisor on the affine line: point to coefficient.
pub type QDivisor = BTreeMap<Rational, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("shift at point {0} is not a lattice vector")]
    NonLatticeShift(Rational),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Structural problems found by [`PolyDivisor::check_proper`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProperIssue {
    SigmaNotPointed,
    RecessionMismatch { point: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProperReport {
    pub issues: Vec<ProperIssue>,
}

impl ProperReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// `D = sum Delta_z * z` with only the coefficients different from `sigma` stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDivisor {
    sigma: Cone,
    coefficients: BTreeMap<Rational, Polyhedron>,
    degree: Polyhedron,
}

impl PolyDivisor {
    /// Stores the coefficients; entries equal to `sigma` itself are dropped.
    pub fn new(sigma: Cone, coefficients: BTreeMap<Rational, Polyhedron>) -> Result<Self, DivisorError> {
        let n = sigma.dim();
        let zero = Polyhedron::translated_cone(vec![Rational::ZERO; n], sigma.clone())?;
        let mut kept = BTreeMap::new();
        for (z, p) in coefficients {
            if p.dim() != n {
                return Err(GeometryError::Dimension { expected: n, found: p.dim() }.into());
            }
            if p.vertices() == zero.vertices() && p.recession_cone().same_as(&sigma) {
                continue;
            }
            kept.insert(z, p);
        }
        let degree = kept.values().try_fold(zero, |acc, p| acc.minkowski_sum(p))?;
        Ok(PolyDivisor { sigma, coefficients: kept, degree })
    }

    /// Drops coefficients equal to `sigma`; `degree` must already be their sum.
    fn from_parts(sigma: Cone, coefficients: BTreeMap<Rational, Polyhedron>, degree: Polyhedron) -> Self {
        let n = sigma.dim();
        let origin = vec![Rational::ZERO; n];
        let coefficients = coefficients
            .into_iter()
            .filter(|(_, p)| !(p.vertices().len() == 1 && p.vertices()[0] == origin && p.recession_cone().same_as(&sigma)))
            .collect();
        PolyDivisor { sigma, coefficients, degree }
    }

    pub fn rank(&self) -> usize {
        self.sigma.dim()
    }

    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    pub fn coefficients(&self) -> &BTreeMap<Rational, Polyhedron> {
        &self.coefficients
    }

    /// Support points in increasing order.
    pub fn points(&self) -> Vec<Rational> {
        self.coefficients.keys().copied().collect()
    }

    /// `Delta_z`, which is `sigma` away from the support.
    pub fn delta(&self, z: Rational) -> Polyhedron {
        self.coefficients.get(&z).cloned().unwrap_or_else(|| {
            Polyhedron::translated_cone(vec![Rational::ZERO; self.rank()], self.sigma.clone())
                .expect("sigma has the divisor's rank")
        })
    }

    /// On the affine line every divisor is principal, so properness reduces to the
    /// structural conditions checked here.
    pub fn check_proper(&self) -> ProperReport {
        let mut issues = Vec::new();
        if !self.sigma.is_pointed() {
            issues.push(ProperIssue::SigmaNotPointed);
        }
        for (&z, p) in &self.coefficients {
            if !p.recession_cone().same_as(&self.sigma) {
                issues.push(ProperIssue::RecessionMismatch { point: z });
            }
        }
        ProperReport { issues }
    }

    /// `m` lies in the weight cone `sigma^dual`.
    pub fn in_weight_cone(&self, m: &[i64]) -> bool {
        self.sigma.rays().iter().all(|r| linalg::dot_zz(r, m) >= 0)
    }

    /// `D(m) = sum h_z(m) * z`.
    pub fn evaluate(&self, m: &[i64]) -> Result<QDivisor, GeometryError> {
        if m.len() != self.rank() {
            return Err(GeometryError::Dimension { expected: self.rank(), found: m.len() });
        }
        if !self.in_weight_cone(m) {
            return Err(GeometryError::Unbounded);
        }
        let mq = to_q(m);
        self.coefficients.iter().map(|(&z, p)| Ok((z, p.support(&mq)?))).collect()
    }

    /// `sum min_i <m, v_{i,z}> * z` over vertices only; used for `D(e)` at roots `e`.
    pub fn evaluate_vertex_min(&self, m: &[i64]) -> QDivisor {
        let mq = to_q(m);
        self.coefficients.iter().map(|(&z, p)| (z, p.vertex_min(&mq))).collect()
    }

    /// Exponents `ceil(-h_z(m))` of the minimal section, one per support point.
    pub fn section_exponents(&self, m: &[i64]) -> Result<BTreeMap<Rational, i64>, GeometryError> {
        Ok(self
            .evaluate(m)?
            .into_iter()
            .map(|(z, h)| (z, i64::try_from((-h).ceil()).expect("exponent fits i64")))
            .collect())
    }

    /// `f_min(m)`, a generator of `A_m` as a `Q[t]`-module.
    pub fn minimal_section(&self, m: &[i64]) -> Result<RatFun, GeometryError> {
        Ok(self
            .section_exponents(m)?
            .into_iter()
            .fold(RatFun::one(), |acc, (z, a)| acc.mul(&RatFun::linear_power(z, a))))
    }

    /// `f_min(m) * t^k * X^m` for `0 <= k <= deg_bound`.
    pub fn weight_space_basis(&self, m: &[i64], deg_bound: usize) -> Result<Vec<SymExpr>, GeometryError> {
        let f = self.minimal_section(m)?;
        Ok((0..=deg_bound)
            .map(|k| SymExpr::homogeneous(f.mul(&RatFun::poly(Poly::monomial(Rational::ONE, k))), m.to_vec()))
            .collect())
    }

    /// Whether `f * X^m` lies in `A_m`, i.e. `div f + D(m) >= 0`.
    pub fn in_weight_space(&self, m: &[i64], f: &RatFun) -> bool {
        if f.is_zero() {
            return true;
        }
        let Ok(inv) = self.inverse_minimal_section(m) else {
            return false;
        };
        f.mul(&inv).is_polynomial()
    }

    /// Whether every homogeneous part of `x` lies in the algebra.
    pub fn contains(&self, x: &SymExpr) -> bool {
        x.parts().iter().all(|(m, f)| self.in_weight_space(m, f))
    }

    /// `deg D = sum Delta_z`, or `sigma` for the zero divisor.
    pub fn degree_polyhedron(&self) -> &Polyhedron {
        &self.degree
    }

    /// `1 / f_min(m)`.
    pub fn inverse_minimal_section(&self, m: &[i64]) -> Result<RatFun, GeometryError> {
        Ok(self
            .section_exponents(m)?
            .into_iter()
            .fold(RatFun::one(), |acc, (z, a)| acc.mul(&RatFun::linear_power(z, -a))))
    }

    /// Replaces `Delta_z` by `Delta_z - v_z`; see [`DivisorShift`].
    pub fn shift(&self, shifts: &BTreeMap<Rational, Vec<i64>>) -> Result<(PolyDivisor, DivisorShift), DivisorError> {
        let mut coeffs: BTreeMap<Rational, Polyhedron> = self.coefficients.clone();
        let mut total = vec![Rational::ZERO; self.rank()];
        for (&z, v) in shifts {
            if v.len() != self.rank() {
                return Err(GeometryError::Dimension { expected: self.rank(), found: v.len() }.into());
            }
            let w = to_q(v);
            coeffs.insert(z, self.delta(z).shifted(&w));
            total = linalg::add(&total, &w);
        }
        let degree = self.degree.shifted(&total);
        let shifts = shifts.iter().filter(|(_, v)| v.iter().any(|&x| x != 0)).map(|(&z, v)| (z, v.clone())).collect();
        Ok((PolyDivisor::from_parts(self.sigma.clone(), coeffs, degree), DivisorShift { shifts }))
    }

    /// Moves each point `z` to `z - c`, matching the coordinate `u = t - c`.
    pub fn translate(&self, c: Rational) -> PolyDivisor {
        let coefficients = self.coefficients.iter().map(|(&z, p)| (z - c, p.clone())).collect();
        PolyDivisor { sigma: self.sigma.clone(), coefficients, degree: self.degree.clone() }
    }

    /// Like [`shift`](Self::shift) with rational input, rejecting non-lattice vectors.
    pub fn shift_rational(&self, shifts: &BTreeMap<Rational, QVec>) -> Result<(PolyDivisor, DivisorShift), DivisorError> {
        let mut int = BTreeMap::new();
        for (&z, v) in shifts {
            if !linalg::is_integral(v) {
                return Err(DivisorError::NonLatticeShift(z));
            }
            int.insert(z, v.iter().map(|x| x.to_integer().unwrap() as i64).collect());
        }
        self.shift(&int)
    }
}

/// The isomorphism `A[D] -> A[D']` for `D = D' + sum (v_z + sigma) * z`:
/// `f X^m -> f * phi^m * X^m` with `phi^m = prod (t - z)^{<m, v_z>}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DivisorShift {
    pub shifts: BTreeMap<Rational, Vec<i64>>,
}

impl DivisorShift {
    pub fn phi(&self, m: &[i64]) -> RatFun {
        self.shifts.iter().fold(RatFun::one(), |acc, (&z, v)| {
            acc.mul(&RatFun::linear_power(z, linalg::dot_zz(m, v)))
        })
    }

    pub fn forward(&self, x: &SymExpr) -> SymExpr {
        x.parts().iter().fold(SymExpr::zero(), |acc, (m, f)| {
            acc.add(&SymExpr::homogeneous(f.mul(&self.phi(m)), m.clone()))
        })
    }

    pub fn backward(&self, x: &SymExpr) -> SymExpr {
        x.parts().iter().fold(SymExpr::zero(), |acc, (m, f)| {
            let inv: Vec<i64> = m.iter().map(|a| -a).collect();
            acc.add(&SymExpr::homogeneous(f.mul(&self.phi(&inv)), m.clone()))
        })
    }
}

/// A homogeneous algebra generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub weight: Vec<i64>,
    pub expr: SymExpr,
}

/// A polynomial relation `sum c * prod x_i^{k_i} = 0` among generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Rational, Vec<u32>)>,
}

impl Relation {
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, k)| k.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Evaluates the relation on the given generator expressions.
    pub fn evaluate(&self, gens: &[SymExpr], rank: usize) -> SymExpr {
        self.terms.iter().fold(SymExpr::zero(), |acc, (c, k)| {
            let mono = k
                .iter()
                .zip(gens)
                .fold(SymExpr::constant(Rational::ONE, rank), |p, (&e, g)| p.mul(&g.pow(e, rank)));
            acc.add(&mono.scale(*c))
        })
    }

    /// Renders with the given names, e.g. `x1 - x1^2*x2^4 + x3*x4`.
    pub fn render(&self, names: &[&str]) -> alloc::string::String {
        render_polynomial(&self.terms, names)
    }
}

/// All lattice points with coordinates in `[-b, b]`, ordered by L1 norm then lexicographically.
/// Renders `sum c * prod name_i^{k_i}` in the given term order.
pub fn render_polynomial(terms: &[(Rational, Vec<u32>)], names: &[&str]) -> alloc::string::String {
    use core::fmt::Write;
    if terms.is_empty() {
        return alloc::string::String::from("0");
    }
    let mut s = alloc::string::String::new();
    for (i, (c, k)) in terms.iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        if c.abs() != Rational::ONE || k.iter().all(|&e| e == 0) {
            parts.push(alloc::format!("{}", c.abs()));
        }
        for (e, name) in k.iter().zip(names) {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(alloc::format!("{}^{}", name, e)),
            }
        }
        let _ = write!(s, "{}", parts.join("*"));
    }
    s
}

/// Lex order read from the last exponent.
fn rev_lex(a: &[u32], b: &[u32]) -> core::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Orders terms by total degree, then by descending reversed-lex exponent.
fn sort_terms(terms: &mut [(Rational, Vec<u32>)]) {
    terms.sort_by(|a, b| {
        let da: u32 = a.1.iter().sum();
        let db: u32 = b.1.iter().sum();
        da.cmp(&db).then(rev_lex(&b.1, &a.1))
    });
}

/// Exponent vectors of total degree at most `deg_bound` whose generator product has weight `m`.
fn monomials_of_weight(weights: &[Vec<i64>], m: &[i64], deg_bound: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, weights: &[Vec<i64>], left: u32, cur: &mut Vec<u32>, acc: &mut Vec<i64>, m: &[i64], out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if acc.as_slice() == m {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(i + 1, weights, left - e, cur, acc, m, out);
            cur.pop();
            for (a, w) in acc.iter_mut().zip(&weights[i]) {
                *a += w;
            }
        }
        for (a, w) in acc.iter_mut().zip(&weights[i]) {
            *a -= w * (left as i64 + 1);
        }
    }
    let mut out = Vec::new();
    let mut acc = vec![0; m.len()];
    go(0, weights, deg_bound, &mut Vec::new(), &mut acc, m, &mut out);
    out
}

pub fn box_points(rank: usize, b: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..rank {
        pts = pts
            .into_iter()
            .flat_map(|p| (-b..=b).map(move |x| {
                let mut q = p.clone();
                q.push(x);
                q
            }))
            .collect();
    }
    pts.sort_by_key(|p| (p.iter().map(|x| x.abs()).sum::<i64>(), p.clone()));
    pts
}

fn add_v(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_v(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Section exponents for all weights of a box, indexed for the generator search.
struct ExponentTable {
    points: Vec<Rational>,
    exps: BTreeMap<Vec<i64>, Vec<i64>>,
}

impl ExponentTable {
    fn new(d: &PolyDivisor, b: i64) -> ExponentTable {
        let points = d.points();
        let mut exps = BTreeMap::new();
        for m in box_points(d.rank(), b) {
            if let Ok(e) = d.section_exponents(&m) {
                exps.insert(m, points.iter().map(|z| e[z]).collect());
            }
        }
        ExponentTable { points, exps }
    }

    /// Powers of `(t - z)` in `f_min(a) f_min(b) / f_min(a + b)`.
    fn delta(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        let s = add_v(a, b);
        let (ea, eb, es) = (self.exps.get(a)?, self.exps.get(b)?, self.exps.get(&s)?);
        Some((0..self.points.len()).map(|i| ea[i] + eb[i] - es[i]).collect())
    }

    /// For each weight, the componentwise least excess reachable by products of `gens`
    /// with polynomial coefficients.
    fn closure(&self, gens: &[Vec<i64>]) -> BTreeMap<Vec<i64>, Vec<i64>> {
        let k = self.points.len();
        let mut reach: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        for g in gens {
            reach.insert(g.clone(), vec![0; k]);
        }
        loop {
            let mut changed = false;
            let snapshot: Vec<(Vec<i64>, Vec<i64>)> = reach.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            for (m, r) in &snapshot {
                for g in gens {
                    let Some(dl) = self.delta(g, m) else { continue };
                    let target = add_v(g, m);
                    let cand: Vec<i64> = (0..k).map(|i| r[i] + dl[i]).collect();
                    match reach.get_mut(&target) {
                        Some(cur) => {
                            for i in 0..k {
                                if cand[i] < cur[i] {
                                    cur[i] = cand[i];
                                    changed = true;
                                }
                            }
                        }
                        None => {
                            reach.insert(target, cand);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return reach;
            }
        }
    }

    /// Weights whose minimal section is an exact monomial in `gens`.
    fn pure_closure(&self, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let mut pure: BTreeSet<Vec<i64>> = gens.iter().cloned().collect();
        let mut frontier: Vec<Vec<i64>> = gens.to_vec();
        while !frontier.is_empty() {
            let mut added = Vec::new();
            for m in &frontier {
                for g in gens {
                    let target = add_v(g, m);
                    if pure.contains(&target) {
                        continue;
                    }
                    if self.delta(g, m).is_some_and(|dl| dl.iter().all(|&x| x == 0)) {
                        pure.insert(target.clone());
                        added.push(target);
                    }
                }
            }
            frontier = added;
        }
        pure
    }

    fn covers(&self, gens: &[Vec<i64>], targets: &[Vec<i64>]) -> bool {
        let reach = self.closure(gens);
        targets.iter().all(|m| reach.get(m).is_some_and(|r| r.iter().all(|&x| x == 0)))
    }
}

impl PolyDivisor {
    /// Homogeneous generators of the algebra among the weights `|m_i| <= b`.
    ///
    /// Factorizations are searched in the doubled box. The function `t` is listed as
    /// a weight-zero generator unless it is a product `g_m * g_{-m}` minus a constant.
    pub fn find_generators(&self, b: i64) -> Vec<Generator> {
        let rank = self.rank();
        let table = ExponentTable::new(self, 2 * b);
        let zero = vec![0i64; rank];
        let targets: Vec<Vec<i64>> = box_points(rank, b)
            .into_iter()
            .filter(|m| *m != zero && table.exps.contains_key(m))
            .collect();
        let extended: Vec<&Vec<i64>> = table.exps.keys().filter(|m| **m != zero).collect();

        let mut gens: Vec<Vec<i64>> = Vec::new();
        for m in &targets {
            let mut best: Option<Vec<i64>> = None;
            for a in &extended {
                if *a == m {
                    continue;
                }
                let c = sub_v(m, a);
                if c == zero {
                    continue;
                }
                if let Some(dl) = table.delta(a, &c) {
                    best = Some(match best {
                        None => dl,
                        Some(bv) => bv.iter().zip(&dl).map(|(x, y)| *x.min(y)).collect(),
                    });
                }
            }
            if best.is_none_or(|bv| bv.iter().any(|&x| x > 0)) {
                gens.push(m.clone());
            }
        }
        // Close up any weights that the indecomposables do not reach.
        // Among the candidates, prefer the one whose exact monomials cover the most weights.
        loop {
            let reach = table.closure(&gens);
            let missing: Vec<&Vec<i64>> = targets
                .iter()
                .filter(|m| !reach.get(*m).is_some_and(|r| r.iter().all(|&x| x == 0)))
                .collect();
            if missing.is_empty() {
                break;
            }
            let best = missing
                .iter()
                .max_by_key(|m| {
                    let mut with = gens.clone();
                    with.push((**m).clone());
                    let pure = table.pure_closure(&with);
                    (targets.iter().filter(|t| pure.contains(*t)).count(), core::cmp::Reverse(m.iter().map(|x| x.abs()).sum::<i64>()))
                })
                .expect("nonempty");
            gens.push((*best).clone());
        }
        // Generating sets are not unique when the weight cone contains a line; trying
        // small weights first keeps those that are reached by exact monomials.
        let mut i = 0;
        while i < gens.len() {
            let mut fewer = gens.clone();
            fewer.remove(i);
            if table.covers(&fewer, &targets) {
                gens = fewer;
            } else {
                i += 1;
            }
        }
        gens.sort_by_key(|p| (p.iter().map(|x| x.abs()).sum::<i64>(), p.clone()));

        let mut out: Vec<Generator> = gens
            .iter()
            .map(|m| Generator {
                weight: m.clone(),
                expr: SymExpr::homogeneous(self.minimal_section(m).expect("in weight cone"), m.clone()),
            })
            .collect();
        if !self.t_is_generated(&table, &gens) {
            out.push(Generator { weight: zero.clone(), expr: SymExpr::t(rank) });
        }
        out
    }

    /// Whether some `g_m`, `g_{-m}` are exact monomials in the generators with
    /// `g_m * g_{-m}` of degree one in `t`.
    fn t_is_generated(&self, table: &ExponentTable, gens: &[Vec<i64>]) -> bool {
        let k = table.points.len();
        let pure = table.pure_closure(gens);
        pure.iter().any(|m| {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            pure.contains(&neg)
                && table
                    .delta(m, &neg)
                    .is_some_and(|dl| dl.iter().sum::<i64>() == 1 && dl.len() == k)
        })
    }

    /// Relations among `gens` up to total degree `deg_bound`, each not implied by
    /// lower ones times monomials.
    /// Writes `x` as a polynomial in `gens` of total degree at most `deg_bound`, or `None`.
    ///
    /// Monomials divisible by the leading monomial of a relation (largest in lex order read
    /// from the last generator) are excluded, so with a single relation the answer is unique.
    pub fn express(
        &self,
        gens: &[Generator],
        relations: &[Relation],
        x: &SymExpr,
        deg_bound: u32,
    ) -> Option<Vec<(Rational, Vec<u32>)>> {
        let rank = self.rank();
        let leads: Vec<Vec<u32>> = relations
            .iter()
            .filter_map(|r| r.terms.iter().map(|(_, k)| k).max_by(|a, b| rev_lex(a, b)).cloned())
            .collect();
        let weights: Vec<Vec<i64>> = gens.iter().map(|g| g.weight.clone()).collect();
        let mut out = Vec::new();
        for (m, f) in x.parts() {
            let monos: Vec<Vec<u32>> = monomials_of_weight(&weights, m, deg_bound)
                .into_iter()
                .filter(|k| !leads.iter().any(|l| l.iter().zip(k).all(|(a, b)| a <= b)))
                .collect();
            let inv = self.inverse_minimal_section(m).ok()?;
            let target = f.mul(&inv);
            if !target.is_polynomial() {
                return None;
            }
            let polys: Vec<Poly> = monos
                .iter()
                .map(|k| {
                    let prod = k
                        .iter()
                        .zip(gens)
                        .fold(SymExpr::constant(Rational::ONE, rank), |p, (&e, g)| p.mul(&g.expr.pow(e, rank)));
                    prod.coefficient(m).mul(&inv).numerator().clone()
                })
                .collect();
            let len = polys.iter().map(|p| p.coeffs().len()).chain(core::iter::once(target.numerator().coeffs().len())).max()?;
            let cols: Vec<QVec> = polys.iter().map(|p| (0..len).map(|r| p.coeff(r)).collect()).collect();
            let b: QVec = (0..len).map(|r| target.numerator().coeff(r)).collect();
            let sol = linalg::solve_columns(&cols, &b)?;
            out.extend(sol.into_iter().zip(monos).filter(|(c, _)| !c.is_zero()));
        }
        sort_terms(&mut out);
        Some(out)
    }

    pub fn find_relations(&self, gens: &[Generator], deg_bound: u32) -> Vec<Relation> {
        let rank = self.rank();
        let ng = gens.len();
        // All exponent vectors with total degree <= deg_bound, with their products.
        let mut monos: Vec<(Vec<u32>, SymExpr)> = vec![(vec![0; ng], SymExpr::constant(Rational::ONE, rank))];
        let mut frontier = monos.clone();
        for _ in 0..deg_bound {
            let mut next = Vec::new();
            for (k, x) in &frontier {
                let last = k.iter().rposition(|&e| e > 0).unwrap_or(0);
                for (i, g) in gens.iter().enumerate().skip(last) {
                    let mut k2 = k.clone();
                    k2[i] += 1;
                    next.push((k2, x.mul(&g.expr)));
                }
            }
            monos.extend(next.iter().cloned());
            frontier = next;
        }
        // Group by weight.
        let mut groups: BTreeMap<Vec<i64>, Vec<(Vec<u32>, RatFun)>> = BTreeMap::new();
        for (k, x) in monos {
            let (m, f) = match x.as_homogeneous() {
                Some((m, f)) => (m.clone(), f.clone()),
                None => continue,
            };
            groups.entry(m).or_default().push((k, f));
        }
        let mut found: Vec<(Vec<i64>, Relation)> = Vec::new();
        for level in 1..=deg_bound {
            for (m, members) in &groups {
                let cols: Vec<&(Vec<u32>, RatFun)> =
                    members.iter().filter(|(k, _)| k.iter().sum::<u32>() <= level).collect();
                if cols.len() < 2 {
                    continue;
                }
                let fmin = self.inverse_minimal_section(m).expect("weight of a product of generators");
                let polys: Vec<Poly> = cols
                    .iter()
                    .map(|(_, f)| {
                        let g = f.mul(&fmin);
                        assert!(g.is_polynomial(), "generator product outside its weight space");
                        g.numerator().clone()
                    })
                    .collect();
                let len = polys.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
                let rows: Vec<QVec> = (0..len).map(|r| polys.iter().map(|p| p.coeff(r)).collect()).collect();
                let kernel = linalg::nullspace(&rows, cols.len());
                if kernel.is_empty() {
                    continue;
                }
                let index: BTreeMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, (k, _))| (k, i)).collect();
                // Known relations times monomials, as vectors over these columns.
                let mut span: Vec<QVec> = Vec::new();
                for (wr, rel) in &found {
                    let shift = sub_v(m, wr);
                    for (mk, _) in groups.get(&shift).map(|v| v.as_slice()).unwrap_or(&[]) {
                        if mk.iter().sum::<u32>() + rel.degree() > level {
                            continue;
                        }
                        let mut v = vec![Rational::ZERO; cols.len()];
                        let mut ok = true;
                        for (c, rk) in &rel.terms {
                            let prod: Vec<u32> = rk.iter().zip(mk).map(|(a, b)| a + b).collect();
                            match index.get(&prod) {
                                Some(&i) => v[i] += *c,
                                None => ok = false,
                            }
                        }
                        if ok {
                            span.push(v);
                        }
                    }
                }
                let mut r = linalg::rank(&span, cols.len());
                for kv in kernel {
                    span.push(kv.clone());
                    let r2 = linalg::rank(&span, cols.len());
                    if r2 == r {
                        span.pop();
                        continue;
                    }
                    r = r2;
                    let mut terms: Vec<(Rational, Vec<u32>)> = kv
                        .iter()
                        .zip(&cols)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, (k, _))| (*c, k.clone()))
                        .collect();
                    terms.sort_by(|a, b| {
                        let da: u32 = a.1.iter().sum();
                        let db: u32 = b.1.iter().sum();
                        (da, core::cmp::Reverse(&a.1)).cmp(&(db, core::cmp::Reverse(&b.1)))
                    });
                    let l = linalg::denominator_lcm(&terms.iter().map(|(c, _)| *c).collect::<Vec<_>>());
                    let lead = terms[0].0;
                    let scale = if lead.is_negative() { -Rational::from(l) } else { Rational::from(l) };
                    for t in terms.iter_mut() {
                        t.0 *= scale;
                    }
                    let g = terms.iter().fold(0i128, |g, (c, _)| num_integer::Integer::gcd(&g, &c.numer()));
                    for t in terms.iter_mut() {
                        t.0 = t.0 / Rational::int(g);
                    }
                    found.push((m.clone(), Relation { terms }));
                }
            }
        }
        found.into_iter().map(|(_, r)| r).collect()
    }
}

/// A divisor with one chosen vertex per point and a marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDivisor {
    base: PolyDivisor,
    chosen: BTreeMap<Rational, QVec>,
    marked: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("chosen point at {point} is not a vertex of its coefficient")]
    NotAVertex { point: Rational },
    #[error("sum of chosen vertices is not a vertex of the degree polyhedron")]
    DegreeNotVertex,
    #[error("non-lattice vertex at {point}, which is not the marked point")]
    NonLatticeUnmarked { point: Rational },
    #[error("no vertex chosen at support point {point}")]
    MissingVertex { point: Rational },
}

impl ColoredDivisor {
    /// Validates the three coloring conditions. `chosen` may omit points whose
    /// coefficient is `sigma` (their vertex is `0`).
    pub fn new(base: PolyDivisor, chosen: BTreeMap<Rational, QVec>, marked: Rational) -> Result<Self, ColoringError> {
        let n = base.rank();
        let mut full = BTreeMap::new();
        for z in base.points() {
            let v = chosen.get(&z).cloned().ok_or(ColoringError::MissingVertex { point: z })?;
            full.insert(z, v);
        }
        for (&z, v) in &chosen {
            if !full.contains_key(&z)
                && (!linalg::is_zero(v) || v.len() != n) {
                    return Err(ColoringError::NotAVertex { point: z });
                }
        }
        for (&z, v) in &full {
            if v.len() != n || !base.delta(z).vertices().contains(v) {
                return Err(ColoringError::NotAVertex { point: z });
            }
        }
        let vdeg = full.values().fold(vec![Rational::ZERO; n], |acc, v| linalg::add(&acc, v));
        if !base.degree_polyhedron().is_vertex(&vdeg) {
            return Err(ColoringError::DegreeNotVertex);
        }
        for (&z, v) in &full {
            if z != marked && !linalg::is_integral(v) {
                return Err(ColoringError::NonLatticeUnmarked { point: z });
            }
        }
        Ok(ColoredDivisor { base, chosen: full, marked })
    }

    pub fn base(&self) -> &PolyDivisor {
        &self.base
    }

    pub fn marked_point(&self) -> Rational {
        self.marked
    }

    /// Chosen vertices at the support points.
    pub fn chosen(&self) -> &BTreeMap<Rational, QVec> {
        &self.chosen
    }

    /// `v_z`, which is `0` off the support.
    pub fn vertex(&self, z: Rational) -> QVec {
        self.chosen.get(&z).cloned().unwrap_or_else(|| vec![Rational::ZERO; self.base.rank()])
    }

    pub fn v_deg(&self) -> QVec {
        self.chosen.values().fold(vec![Rational::ZERO; self.base.rank()], |acc, v| linalg::add(&acc, v))
    }

    /// `<m, v_z>`.
    pub fn pair(&self, z: Rational, m: &[i64]) -> Rational {
        dot_zq(m, &self.vertex(z))
    }

    /// All vertices lie in the lattice.
    pub fn is_integral(&self) -> bool {
        self.chosen.values().all(|v| linalg::is_integral(v))
    }

    /// Same colored vertices, different marked point (allowed when all are lattice points).
    pub fn with_marked(&self, marked: Rational) -> Result<ColoredDivisor, ColoringError> {
        ColoredDivisor::new(self.base.clone(), self.chosen.clone(), marked)
    }

    /// The same coloring after moving each point `z` to `z - c`.
    pub fn translate(&self, c: Rational) -> ColoredDivisor {
        ColoredDivisor {
            base: self.base.translate(c),
            chosen: self.chosen.iter().map(|(&z, v)| (z - c, v.clone())).collect(),
            marked: self.marked - c,
        }
    }

    /// The same coloring on `D - sum (w_z + sigma) * z`, with vertices `v_z - w_z`.
    pub fn shift(&self, shifts: &BTreeMap<Rational, Vec<i64>>) -> Result<(ColoredDivisor, DivisorShift), DivisorError> {
        let (base, sh) = self.base.shift(shifts)?;
        let n = self.base.rank();
        let mut chosen = self.chosen.clone();
        for (&z, w) in shifts {
            let v = chosen.entry(z).or_insert_with(|| vec![Rational::ZERO; n]);
            *v = linalg::sub(v, &to_q(w));
        }
        let points = base.points();
        chosen.retain(|z, v| points.contains(z) || !linalg::is_zero(v));
        // Shifting by lattice vectors preserves all three coloring conditions.
        Ok((ColoredDivisor { base, chosen, marked: self.marked }, sh))
    }

    /// Vertex choices that satisfy the first two coloring conditions, in lexicographic order.
    pub fn vertex_choices(base: &PolyDivisor) -> Vec<BTreeMap<Rational, QVec>> {
        let mut out: Vec<BTreeMap<Rational, QVec>> = vec![BTreeMap::new()];
        for (&z, p) in base.coefficients() {
            out = out
                .into_iter()
                .flat_map(|c| {
                    p.vertices().iter().map(move |v| {
                        let mut c2 = c.clone();
                        c2.insert(z, v.clone());
                        c2
                    })
                })
                .collect();
        }
        let deg = base.degree_polyhedron();
        let n = base.rank();
        out.into_iter()
            .filter(|c| deg.is_vertex(&c.values().fold(vec![Rational::ZERO; n], |acc, v| linalg::add(&acc, v))))
            .collect()
    }

    /// All valid colorings. When every vertex is a lattice point the marked point
    /// ranges over the support (or is `0` for the zero divisor).
    pub fn all(base: &PolyDivisor) -> Vec<ColoredDivisor> {
        let mut out = Vec::new();
        for choice in ColoredDivisor::vertex_choices(base) {
            let nonlattice: Vec<Rational> =
                choice.iter().filter(|(_, v)| !linalg::is_integral(v)).map(|(&z, _)| z).collect();
            let marks = match nonlattice.len() {
                0 if base.points().is_empty() => vec![Rational::ZERO],
                0 => base.points(),
                1 => nonlattice,
                _ => continue,
            };
            for z0 in marks {
                if let Ok(c) = ColoredDivisor::new(base.clone(), choice.clone(), z0) {
                    out.push(c);
                }
            }
        }
        out
    }
}
