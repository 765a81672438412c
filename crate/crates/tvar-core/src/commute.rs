//! Commutators of homogeneous derivations in closed form, and the combinatorial
//! criteria deciding when two of them commute.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::lattice_geometry::linalg::{self, dot_zq, dot_zz, QVec};
use crate::lnd::{Derivation, VerticalLnd};
use crate::pdivisor::{DivisorError, DivisorShift};
use crate::rational::Rational;
use crate::roots::{is_coherent_pair, marked_point_choices, CoherenceFailure, HorizontalData};
use crate::symexpr::{RatFun, SymExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommuteError {
    #[error("the derivations live on different divisors")]
    DifferentDivisors,
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error("transported pair is not coherent: {0}")]
    Transport(#[from] CoherenceFailure),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    VV,
    VH,
    HH,
}

impl PairClass {
    pub fn of(a: &Derivation, b: &Derivation) -> PairClass {
        match (a.is_vertical(), b.is_vertical()) {
            (true, true) => PairClass::VV,
            (false, false) => PairClass::HH,
            _ => PairClass::VH,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::VV => "VV",
            PairClass::VH => "VH",
            PairClass::HH => "HH",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `D1(D2 x) - D2(D1 x)`.
pub fn commutator(d1: &Derivation, d2: &Derivation, x: &SymExpr) -> SymExpr {
    d1.apply(&d2.apply(x)).sub(&d2.apply(&d1.apply(x)))
}

// ---------------------------------------------------------------- vertical / vertical

/// `<m, rho~><e~, rho> - <m, rho><e, rho~>`.
pub fn vv_coefficient(a: &VerticalLnd, b: &VerticalLnd, m: &[i64]) -> i64 {
    dot_zz(m, &b.root.ray) * dot_zz(&b.root.e, &a.root.ray) - dot_zz(m, &a.root.ray) * dot_zz(&a.root.e, &b.root.ray)
}

/// `[D1, D2](f X^m)`.
pub fn comm_vv(a: &VerticalLnd, b: &VerticalLnd, m: &[i64], f: &RatFun) -> SymExpr {
    let c = vv_coefficient(a, b, m);
    let target: Vec<i64> = (0..m.len()).map(|i| m[i] + a.root.e[i] + b.root.e[i]).collect();
    SymExpr::homogeneous(a.phi.mul(&b.phi).mul(f).scale(Rational::from(c)), target)
}

pub fn criterion_vv(a: &VerticalLnd, b: &VerticalLnd) -> bool {
    a.root.ray == b.root.ray || (dot_zz(&b.root.e, &a.root.ray) == 0 && dot_zz(&a.root.e, &b.root.ray) == 0)
}

// ---------------------------------------------------------------- vertical / horizontal

/// `L(m) = <m, v_z0> + q sum_{z != z0} <m, v_z> / (t - z)`, so that `q (Phi^m)' / Phi^m = -L(m) + <m, v_z0>`.
fn l_factor(h: &HorizontalData, m: &[i64]) -> RatFun {
    let z0 = h.marked_point();
    let mut sum = RatFun::zero();
    for (&z, v) in h.colored.chosen() {
        if z != z0 {
            sum = sum.add(&RatFun::linear_power(z, -1).scale(dot_zq(m, v)));
        }
    }
    RatFun::constant(dot_zq(m, &h.marked_vertex())).add(&RatFun::linear_power(z0, 1).mul(&sum))
}

/// `prod_{z != z0} (t - z)^{-<m, v_z>}`.
fn phi_off_marked(h: &HorizontalData, m: &[i64]) -> RatFun {
    let z0 = h.marked_point();
    h.colored.chosen().iter().filter(|(&z, _)| z != z0).fold(RatFun::one(), |acc, (&z, v)| {
        acc.mul(&RatFun::linear_power(z, -(dot_zq(m, v).to_integer().expect("lattice vertex") as i64)))
    })
}

/// `[Dv, Dh](t) = d <e~, rho> phi q^{s+1} Phi^{e~} X^{e+e~}`.
pub fn comm_vh_t(v: &VerticalLnd, h: &HorizontalData) -> SymExpr {
    let k = dot_zz(&h.e, &v.root.ray);
    let f = RatFun::linear_power(h.marked_point(), h.s + 1)
        .mul(&phi_off_marked(h, &h.e))
        .mul(&v.phi)
        .scale(Rational::from(h.d * k));
    SymExpr::homogeneous(f, linalg_add(&v.root.e, &h.e))
}

/// `[Dv, Dh](X^m) = d q^s Phi^{e~} X^{m+e+e~} (<e~, rho> phi L(m) - <m, rho> (q phi' + phi L(e)))`.
pub fn comm_vh_chi(v: &VerticalLnd, h: &HorizontalData, m: &[i64]) -> SymExpr {
    let q = RatFun::linear_power(h.marked_point(), 1);
    let k = Rational::from(dot_zz(&h.e, &v.root.ray));
    let km = Rational::from(dot_zz(m, &v.root.ray));
    let ode = q.mul(&v.phi.derivative()).add(&v.phi.mul(&l_factor(h, &v.root.e)));
    let bracket = v.phi.mul(&l_factor(h, m)).scale(k).sub(&ode.scale(km));
    let f = RatFun::linear_power(h.marked_point(), h.s)
        .mul(&phi_off_marked(h, &h.e))
        .mul(&bracket)
        .scale(Rational::from(h.d));
    SymExpr::homogeneous(f, linalg_add(m, &linalg_add(&v.root.e, &h.e)))
}

/// Both commutator components vanish: `<e~, rho> = 0`, `<e, v_z0>` integral and
/// `phi = c prod_z (t - z)^{-<e, v_z>}`.
pub fn criterion_vh(v: &VerticalLnd, h: &HorizontalData) -> bool {
    if dot_zz(&h.e, &v.root.ray) != 0 {
        return false;
    }
    if !dot_zq(&v.root.e, &h.marked_vertex()).is_integer() {
        return false;
    }
    let q = RatFun::linear_power(h.marked_point(), 1);
    q.mul(&v.phi.derivative()).add(&v.phi.mul(&l_factor(h, &v.root.e))).is_zero()
}

fn linalg_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

// ---------------------------------------------------------------- horizontal / horizontal

/// Two horizontal derivations moved to coordinates where the second has marked
/// point `0` and the first has `v_z = 0` away from its marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedSystem {
    /// The original marked point of the second derivation; the new coordinate is `t - translation`.
    pub translation: Rational,
    pub shift: DivisorShift,
    pub first: HorizontalData,
    pub second: HorizontalData,
}

impl AssociatedSystem {
    /// Maps an element of the original algebra into the associated coordinates.
    pub fn transport(&self, x: &SymExpr) -> SymExpr {
        self.shift.forward(&x.shift_t(self.translation))
    }

    pub fn z0(&self) -> Rational {
        self.first.marked_point()
    }

    /// `<m, v_z0>`.
    pub fn v(&self, m: &[i64]) -> Rational {
        dot_zq(m, &self.first.marked_vertex())
    }

    /// `<m, v~_0>`.
    pub fn vt(&self, m: &[i64]) -> Rational {
        dot_zq(m, &self.second.marked_vertex())
    }

    /// Shifted vertices of the second derivation away from `0`.
    pub fn second_offsets(&self) -> BTreeMap<Rational, QVec> {
        self.second
            .colored
            .chosen()
            .iter()
            .filter(|(&z, v)| !z.is_zero() && !linalg::is_zero(v))
            .map(|(&z, v)| (z, v.clone()))
            .collect()
    }

    /// `phi^m = prod_{z != 0} (t - z)^{-<m, v~_z>}`.
    pub fn phi(&self, m: &[i64]) -> RatFun {
        self.second_offsets().iter().fold(RatFun::one(), |acc, (&z, v)| {
            acc.mul(&RatFun::linear_power(z, -(dot_zq(m, v).to_integer().expect("lattice vertex") as i64)))
        })
    }

    pub fn alpha(&self, m: &[i64]) -> (RatFun, RatFun) {
        crate::lnd::alpha(&self.second_offsets(), m)
    }
}

pub fn associated_system(a: &HorizontalData, b: &HorizontalData) -> Result<AssociatedSystem, CommuteError> {
    if a.colored.base() != b.colored.base() {
        return Err(CommuteError::DifferentDivisors);
    }
    let c = b.marked_point();
    let (ca, cb) = (a.colored.translate(c), b.colored.translate(c));
    let z0 = ca.marked_point();
    let shifts: BTreeMap<Rational, Vec<i64>> = ca
        .chosen()
        .iter()
        .filter(|(&z, v)| z != z0 && !linalg::is_zero(v))
        .map(|(&z, v)| (z, v.iter().map(|x| x.to_integer().expect("lattice vertex") as i64).collect()))
        .collect();
    let (ca, shift) = ca.shift(&shifts)?;
    let (cb, _) = cb.shift(&shifts)?;
    let first = a.moved_to(ca);
    let second = b.moved_to(cb);
    Ok(AssociatedSystem { translation: c, shift, first, second })
}

/// The two derivations of an associated system, acting on its coordinates.
pub fn associated_derivations(sys: &AssociatedSystem) -> (Derivation, Derivation) {
    (Derivation::horizontal(sys.first.clone()), Derivation::horizontal(sys.second.clone()))
}

fn t_pow(k: i64) -> RatFun {
    RatFun::linear_power(Rational::ZERO, k)
}

/// `[D, D~](t) = -d d~ t^{s~} q^s phi^{e~} X^{e+e~} B` in associated coordinates, with
/// `B = (v~_0(e) - s~ - v_z0(e~) + s) t - (v~_0(e) - s~ - 1) z0 - (alpha_e + alpha_e~) q`.
/// Expanding the Leibniz terms gives `-B`, not `B`, as the bracket for `D1 D2 - D2 D1`.
pub fn comm_hh_t(sys: &AssociatedSystem) -> SymExpr {
    let (e, et) = (&sys.first.e, &sys.second.e);
    let (s, st) = (Rational::from(sys.first.s), Rational::from(sys.second.s));
    let z0 = sys.z0();
    let q = RatFun::linear_power(z0, 1);
    let (ae, _) = sys.alpha(e);
    let (aet, _) = sys.alpha(et);
    let b = RatFun::t()
        .scale(sys.vt(e) - st - sys.v(et) + s)
        .sub(&RatFun::constant((sys.vt(e) - st - Rational::ONE) * z0))
        .sub(&ae.add(&aet).mul(&q));
    let f = t_pow(sys.second.s)
        .mul(&RatFun::linear_power(z0, sys.first.s))
        .mul(&sys.phi(et))
        .mul(&b)
        .scale(-Rational::from(sys.first.d * sys.second.d));
    SymExpr::homogeneous(f, linalg_add(e, et))
}

/// `[D, D~](X^m) = d d~ t^{s~-1} q^{s-1} phi^{e~} X^{m+e+e~} (C0 + C1 + C2)` in associated coordinates.
pub fn comm_hh_chi(sys: &AssociatedSystem, m: &[i64]) -> SymExpr {
    let (e, et) = (&sys.first.e, &sys.second.e);
    let (s, st) = (Rational::from(sys.first.s), Rational::from(sys.second.s));
    let z0 = sys.z0();
    let t = RatFun::t();
    let q = RatFun::linear_power(z0, 1);
    let q2 = q.mul(&q);
    let tq = t.mul(&q);
    let (ae, _) = sys.alpha(e);
    let (aet, _) = sys.alpha(et);
    let (am, dam) = sys.alpha(m);
    let c0 = q2
        .scale(st * sys.vt(m))
        .sub(&t.mul(&t).scale(s * sys.v(m)))
        .add(&tq.scale(sys.vt(m) * sys.v(et) - sys.v(m) * sys.vt(e)));
    let c1 = aet
        .mul(&q2)
        .scale(sys.vt(m))
        .sub(&am.mul(&q2).scale(st))
        .sub(&am.mul(&tq).scale(sys.v(et)))
        .add(&ae.mul(&tq).scale(sys.v(m)));
    let c2 = t.mul(&dam).mul(&q2).neg().sub(&am.mul(&aet).mul(&q2));
    let f = t_pow(sys.second.s - 1)
        .mul(&RatFun::linear_power(z0, sys.first.s - 1))
        .mul(&sys.phi(et))
        .mul(&c0.add(&c1).add(&c2))
        .scale(Rational::from(sys.first.d * sys.second.d));
    SymExpr::homogeneous(f, linalg_add(m, &linalg_add(e, et)))
}

/// Coherency data at one point, in the original coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCoherency {
    pub point: Rational,
    pub equal_vertices: bool,
    /// `v~_z(e) >= 1 + v_z(e)` (scaled by `d` at `z0`): holds, and holds with equality.
    pub first_holds: bool,
    pub first_equality: bool,
    /// `v_z(e~) >= 1 + v~_z(e~)` (scaled by `d~` at `z~0`).
    pub second_holds: bool,
    pub second_equality: bool,
}

impl PointCoherency {
    pub fn is_coherent(&self) -> bool {
        self.equal_vertices || (self.first_equality && self.second_equality)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherencyReport {
    pub marked: (Rational, Rational),
    pub points: Vec<PointCoherency>,
    pub simple: bool,
    pub adjacent: bool,
    pub coherent: bool,
}

pub fn coherency_report(a: &HorizontalData, b: &HorizontalData, sys: &AssociatedSystem) -> CoherencyReport {
    let (z0, zt0) = (a.marked_point(), b.marked_point());
    let mut pts: BTreeSet<Rational> = a.colored.base().points().into_iter().collect();
    pts.insert(z0);
    pts.insert(zt0);
    let mut points = Vec::new();
    for z in pts {
        let (v, vt) = (a.colored.vertex(z), b.colored.vertex(z));
        let sa = if z == z0 { Rational::from(a.d) } else { Rational::ONE };
        let sb = if z == zt0 { Rational::from(b.d) } else { Rational::ONE };
        let lhs1 = sa * dot_zq(&a.e, &vt);
        let rhs1 = Rational::ONE + sa * dot_zq(&a.e, &v);
        let lhs2 = sb * dot_zq(&b.e, &v);
        let rhs2 = Rational::ONE + sb * dot_zq(&b.e, &vt);
        points.push(PointCoherency {
            point: z,
            equal_vertices: v == vt,
            first_holds: lhs1 >= rhs1,
            first_equality: lhs1 == rhs1,
            second_holds: lhs2 >= rhs2,
            second_equality: lhs2 == rhs2,
        });
    }
    let coherent = points.iter().all(PointCoherency::is_coherent);
    CoherencyReport {
        marked: (z0, zt0),
        simple: sys.second_offsets().len() <= 1,
        adjacent: a.colored.chosen() == b.colored.chosen() && z0 == zt0,
        coherent,
        points,
    }
}

/// The five commuting configurations, read in associated coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HhCase {
    Case1a,
    Case1b,
    Case2a,
    Case2b,
    Case3,
}

impl HhCase {
    pub fn as_str(self) -> &'static str {
        match self {
            HhCase::Case1a => "1a",
            HhCase::Case1b => "1b",
            HhCase::Case2a => "2a",
            HhCase::Case2b => "2b",
            HhCase::Case3 => "3",
        }
    }
}

impl fmt::Display for HhCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which of the five configurations the associated system is in, if any.
pub fn matched_case(sys: &AssociatedSystem) -> Option<HhCase> {
    let (e, et) = (&sys.first.e, &sys.second.e);
    let (d, dt) = (Rational::from(sys.first.d), Rational::from(sys.second.d));
    let one = Rational::ONE;
    let z0 = sys.z0();
    let offsets = sys.second_offsets();
    let v0 = sys.first.colored.vertex(Rational::ZERO);
    let vt0 = sys.second.marked_vertex();
    let pair0 = |m: &[i64], v: &QVec| dot_zq(m, v);
    if z0.is_zero() {
        if offsets.is_empty() {
            if v0 == vt0 {
                return Some(HhCase::Case1a);
            }
            if d * pair0(e, &vt0) == one + d * pair0(e, &v0) && dt * pair0(et, &v0) == one + dt * pair0(et, &vt0) {
                return Some(HhCase::Case1b);
            }
        }
        if offsets.len() == 1 && linalg::is_integral(&v0) && linalg::is_integral(&vt0) {
            let w = offsets.values().next().expect("one offset");
            if pair0(e, w) == one && pair0(et, w) == -one {
                if v0 == vt0 {
                    return Some(HhCase::Case2a);
                }
                if pair0(e, &vt0) == one + pair0(e, &v0) && pair0(et, &v0) == one + pair0(et, &vt0) {
                    return Some(HhCase::Case2b);
                }
            }
        }
        return None;
    }
    if offsets.keys().any(|&z| z != z0) || d != dt {
        return None;
    }
    let v = sys.first.marked_vertex();
    let vt = sys.second.colored.vertex(z0);
    let ok = d * pair0(e, &vt) == one + d * pair0(e, &v)
        && pair0(et, &v) == one + pair0(et, &vt)
        && pair0(e, &vt0) == one
        && d * pair0(et, &vt0) == -one;
    ok.then_some(HhCase::Case3)
}

/// Outcome of the horizontal criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HhVerdict {
    pub criterion: bool,
    pub matched_case: Option<HhCase>,
    /// Coherent and simple, for some choice of marked points.
    pub theorem: bool,
    /// Report for the matching choice of marked points, or the first one tried.
    pub report: CoherencyReport,
}

/// Evaluates the five-case criterion over every admissible choice of marked points.
pub fn criterion_hh(a: &HorizontalData, b: &HorizontalData) -> Result<HhVerdict, CommuteError> {
    let mut first: Option<CoherencyReport> = None;
    let mut theorem = false;
    let mut found: Option<(HhCase, CoherencyReport)> = None;
    let firsts = marked_point_choices(&a.colored).into_iter().map(|z| remark(a, z)).collect::<Result<Vec<_>, _>>()?;
    let seconds = marked_point_choices(&b.colored).into_iter().map(|z| remark(b, z)).collect::<Result<Vec<_>, _>>()?;
    for a2 in &firsts {
        for b2 in &seconds {
            let sys = associated_system(a2, b2)?;
            let report = coherency_report(a2, b2, &sys);
            theorem |= report.coherent && report.simple;
            if found.is_none() {
                if let Some(case) = matched_case(&sys) {
                    found = Some((case, report.clone()));
                }
            }
            first.get_or_insert(report);
        }
    }
    Ok(match found {
        Some((case, report)) => HhVerdict { criterion: true, matched_case: Some(case), theorem, report },
        None => HhVerdict { criterion: false, matched_case: None, theorem, report: first.expect("at least one choice") },
    })
}

fn remark(h: &HorizontalData, z: Rational) -> Result<HorizontalData, CommuteError> {
    if h.marked_point() == z {
        return Ok(h.clone());
    }
    let cd = h.colored.with_marked(z).map_err(DivisorError::from)?;
    Ok(is_coherent_pair(&cd, &h.e)?)
}

// ---------------------------------------------------------------- dispatch

/// Criterion verdict for any pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub class: PairClass,
    pub criterion: bool,
    pub hh: Option<HhVerdict>,
}

pub fn criterion(a: &Derivation, b: &Derivation) -> Result<Verdict, CommuteError> {
    let class = PairClass::of(a, b);
    let (criterion, hh) = match (a, b) {
        (Derivation::Vertical(x), Derivation::Vertical(y)) => (criterion_vv(x, y), None),
        (Derivation::Vertical(v), Derivation::Horizontal(h)) | (Derivation::Horizontal(h), Derivation::Vertical(v)) => {
            (criterion_vh(v, h), None)
        }
        (Derivation::Horizontal(x), Derivation::Horizontal(y)) => {
            let v = criterion_hh(x, y)?;
            (v.criterion, Some(v))
        }
    };
    Ok(Verdict { class, criterion, hh })
}
