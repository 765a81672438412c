//! Brute-force commutation checks used to validate the combinatorial criteria.
//!
//! The commutator of two derivations is again a derivation of `Q(t)(M)`, so it
//! vanishes identically once it vanishes on `t` and on `X^{e_1}, ..., X^{e_n}`.
//! Algebra generators are included in the test set as well.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::commute::{commutator, criterion, PairClass};
use crate::lnd::{in_phi, Derivation};
use crate::pdivisor::PolyDivisor;
use crate::rational::Rational;
use crate::roots::{demazure_roots_in_box, enumerate_horizontal};
use crate::symexpr::{Poly, RatFun, SymExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("point {0} is repeated")]
    RepeatedPoint(Rational),
    #[error("{points} points but {coeffs} coefficients")]
    Length { points: usize, coeffs: usize },
}

/// A test element on which the commutator does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub element: SymExpr,
    pub value: SymExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub commutes: bool,
    pub witness: Option<Witness>,
}

/// `gens` together with `t` and the characters of the standard basis.
pub fn test_set(rank: usize, gens: &[SymExpr]) -> Vec<SymExpr> {
    let mut out: Vec<SymExpr> = gens.to_vec();
    out.push(SymExpr::t(rank));
    for i in 0..rank {
        let mut m = alloc::vec![0; rank];
        m[i] = 1;
        out.push(SymExpr::chi(m));
    }
    let mut seen = BTreeSet::new();
    out.retain(|x| seen.insert(x.clone()));
    out
}

pub fn oracle_commutes(a: &Derivation, b: &Derivation, gens: &[SymExpr]) -> OracleResult {
    let rank = a.degree().len();
    for g in test_set(rank, gens) {
        let value = commutator(a, b, &g);
        if !value.is_zero() {
            return OracleResult { commutes: false, witness: Some(Witness { element: g, value }) };
        }
    }
    OracleResult { commutes: true, witness: None }
}

/// Whether `sum a_k / (t - z_k)` is constant, decided on the common numerator
/// `sum a_k mu_k(t)` over `mu(t) = prod (t - z_k)`.
pub fn lemma_ratfun_test(points: &[Rational], coeffs: &[Rational]) -> Result<bool, OracleError> {
    if points.len() != coeffs.len() {
        return Err(OracleError::Length { points: points.len(), coeffs: coeffs.len() });
    }
    let mut seen = BTreeSet::new();
    for &z in points {
        if !seen.insert(z) {
            return Err(OracleError::RepeatedPoint(z));
        }
    }
    let mut num = Poly::zero();
    for (k, &a) in coeffs.iter().enumerate() {
        let mu_k = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .fold(Poly::one(), |acc, (_, &z)| acc.mul(&Poly::linear(z)));
        num = num.add(&mu_k.scale(a));
    }
    // deg num < deg mu, so num / mu is constant only when num vanishes
    Ok(num.is_zero())
}

/// Candidate `phi` for a vertical derivation of degree `e`: the minimal section of
/// `D(e)`, that section times `t`, and `prod (t - z)^{-<e, v_z>}` for each vertex choice.
pub fn vertical_phi_candidates(d: &PolyDivisor, e: &[i64]) -> Vec<RatFun> {
    let mut cands = Vec::new();
    let fmin = d
        .evaluate_vertex_min(e)
        .iter()
        .fold(RatFun::one(), |acc, (&z, h)| acc.mul(&RatFun::linear_power(z, (-*h).ceil() as i64)));
    cands.push(fmin.clone());
    cands.push(fmin.mul(&RatFun::t()));
    for choice in crate::pdivisor::ColoredDivisor::vertex_choices(d) {
        let mut f = RatFun::one();
        let mut ok = true;
        for (&z, v) in &choice {
            match crate::lattice_geometry::linalg::dot_zq(e, v).to_integer() {
                Some(k) => f = f.mul(&RatFun::linear_power(z, -(k as i64))),
                None => ok = false,
            }
        }
        if ok {
            cands.push(f);
        }
    }
    let mut seen = BTreeSet::new();
    cands.retain(|f| in_phi(d, e, f) && seen.insert(f.clone()));
    cands
}

/// A derivation with a stable label and its horizontal family, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled {
    pub label: String,
    pub family: Option<usize>,
    pub derivation: Derivation,
}

/// Every vertical derivation from a root in the box with a candidate `phi`, then
/// every horizontal one from each family in the box.
pub fn enumerate_derivations(d: &PolyDivisor, b: i64) -> Vec<Labeled> {
    let mut out = Vec::new();
    if d.sigma().is_pointed() && !d.sigma().is_zero() {
        for root in demazure_roots_in_box(d.sigma(), b).unwrap_or_default() {
            for phi in vertical_phi_candidates(d, &root.e) {
                let der = Derivation::vertical(d, root.clone(), phi).expect("candidate lies in Phi_e");
                out.push(Labeled { label: alloc::format!("{}", der), family: None, derivation: der });
            }
        }
    }
    for (fam, h) in enumerate_horizontal(d, b) {
        let der = Derivation::horizontal(h);
        out.push(Labeled { label: alloc::format!("{}", der), family: Some(fam), derivation: der });
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCount {
    pub pairs: usize,
    pub commuting: usize,
    pub disagreements: usize,
    /// HH only: pairs where the coherent-and-simple predicate differs from the five-case criterion.
    pub theorem_mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub class: PairClass,
    pub first: String,
    pub second: String,
    pub criterion: bool,
    pub oracle: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub derivations: usize,
    pub counts: BTreeMap<PairClass, ClassCount>,
    pub disagreements: Vec<Disagreement>,
    /// HH pairs whose theorem-level predicate differs from the criterion, as label pairs.
    pub theorem_mismatches: Vec<(String, String)>,
    /// Pairs the criterion could not evaluate, with the error text.
    pub errors: Vec<(String, String, String)>,
}

impl CrossCheckReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.errors.is_empty()
    }
}

/// Criterion and oracle results for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub class: PairClass,
    pub first: String,
    pub second: String,
    /// The criterion verdict, or the error text when it could not be evaluated.
    pub criterion: Result<bool, String>,
    /// HH only: the coherent-and-simple predicate.
    pub theorem: Option<bool>,
    pub oracle: OracleResult,
}

pub fn check_pair(a: &Labeled, b: &Labeled, gens: &[SymExpr]) -> PairOutcome {
    let class = PairClass::of(&a.derivation, &b.derivation);
    let (criterion, theorem) = match criterion(&a.derivation, &b.derivation) {
        Ok(v) => (Ok(v.criterion), v.hh.map(|h| h.theorem)),
        Err(err) => (Err(alloc::format!("{}", err)), None),
    };
    PairOutcome {
        class,
        first: a.label.clone(),
        second: b.label.clone(),
        criterion,
        theorem,
        oracle: oracle_commutes(&a.derivation, &b.derivation, gens),
    }
}

impl CrossCheckReport {
    pub fn record(&mut self, o: PairOutcome) {
        let crit = match o.criterion {
            Ok(c) => c,
            Err(err) => {
                self.errors.push((o.first, o.second, err));
                return;
            }
        };
        let count = self.counts.entry(o.class).or_default();
        count.pairs += 1;
        count.commuting += o.oracle.commutes as usize;
        if o.theorem.is_some_and(|t| t != crit) {
            count.theorem_mismatches += 1;
            self.theorem_mismatches.push((o.first.clone(), o.second.clone()));
        }
        if crit != o.oracle.commutes {
            count.disagreements += 1;
            self.disagreements.push(Disagreement {
                class: o.class,
                first: o.first,
                second: o.second,
                criterion: crit,
                oracle: o.oracle.commutes,
                witness: o.oracle.witness,
            });
        }
    }
}

/// Compares criterion and oracle on every unordered pair of derivations.
pub fn cross_check_list(ders: &[Labeled], gens: &[SymExpr]) -> CrossCheckReport {
    let mut rep = CrossCheckReport { derivations: ders.len(), ..Default::default() };
    for i in 0..ders.len() {
        for j in i..ders.len() {
            rep.record(check_pair(&ders[i], &ders[j], gens));
        }
    }
    rep
}

/// Cross-check over every derivation in the box, testing on `t`, the basis
/// characters and the algebra generators found in the same box.
pub fn cross_check(d: &PolyDivisor, b: i64) -> CrossCheckReport {
    let gens: Vec<SymExpr> = d.find_generators(b.max(1)).into_iter().map(|g| g.expr).collect();
    cross_check_list(&enumerate_derivations(d, b), &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_geometry::linalg::to_q;
    use crate::lattice_geometry::{Cone, Polyhedron};
    use crate::pdivisor::tests::{example_line, example_surface};
    use crate::roots::{horizontal_families, is_coherent_pair};

    fn line_pair(fa: usize, ea: i64, fb: usize, eb: i64) -> (Derivation, Derivation) {
        let fams = horizontal_families(&example_line());
        let h = |f: usize, e: i64| Derivation::horizontal(is_coherent_pair(&fams[f].colored, &[e]).unwrap());
        (h(fa, ea), h(fb, eb))
    }

    #[test]
    fn partials_commute() {
        let (dy, dx) = line_pair(0, 1, 1, -1);
        assert!(oracle_commutes(&dy, &dx, &[]).commutes);
    }

    #[test]
    fn x_dy_and_y_dx_do_not() {
        let (xdy, ydx) = line_pair(0, 2, 1, -2);
        let r = oracle_commutes(&xdy, &ydx, &[]);
        assert!(!r.commutes);
        let w = r.witness.unwrap();
        assert_eq!(commutator(&xdy, &ydx, &w.element), w.value);
    }

    #[test]
    fn lemma_small_cases() {
        let pts = [Rational::ZERO, Rational::ONE, Rational::from(3)];
        assert!(lemma_ratfun_test(&pts, &[Rational::ZERO; 3]).unwrap());
        assert!(!lemma_ratfun_test(&pts[..1], &[Rational::ONE]).unwrap());
        assert!(!lemma_ratfun_test(&pts, &[Rational::from(2), -Rational::ONE, Rational::from(5)]).unwrap());
        assert_eq!(
            lemma_ratfun_test(&[Rational::ONE, Rational::ONE], &[Rational::ONE, Rational::ONE]),
            Err(OracleError::RepeatedPoint(Rational::ONE))
        );
    }

    #[test]
    fn phi_candidates_on_orthant_instance() {
        let seg = Polyhedron::new(vec![to_q(&[1, 0]), to_q(&[0, 1])], Cone::orthant(2)).unwrap();
        let d = PolyDivisor::new(Cone::orthant(2), [(Rational::ZERO, seg)].into_iter().collect()).unwrap();
        let c = vertical_phi_candidates(&d, &[-1, 0]);
        assert!(c.contains(&RatFun::t()));
        assert!(c.iter().all(|f| in_phi(&d, &[-1, 0], f)));
    }

    #[test]
    fn line_cross_check_is_clean() {
        let rep = cross_check(&example_line(), 3);
        assert!(rep.is_clean(), "{:?}", rep.disagreements);
        assert!(rep.theorem_mismatches.is_empty(), "{:?}", rep.theorem_mismatches);
        assert_eq!(rep.counts[&PairClass::HH].pairs, rep.derivations * (rep.derivations + 1) / 2);
    }

    #[test]
    fn surface_cross_check_is_clean() {
        let rep = cross_check(&example_surface(), 2);
        assert!(rep.is_clean(), "{:?}", rep.disagreements);
        assert!(rep.theorem_mismatches.is_empty(), "{:?}", rep.theorem_mismatches);
    }

    #[test]
    fn orthant_instance_cross_check_is_clean() {
        let seg = Polyhedron::new(vec![to_q(&[1, 0]), to_q(&[0, 1])], Cone::orthant(2)).unwrap();
        let d = PolyDivisor::new(Cone::orthant(2), [(Rational::ZERO, seg)].into_iter().collect()).unwrap();
        let rep = cross_check(&d, 2);
        assert!(rep.is_clean(), "{:?} {:?}", rep.disagreements, rep.errors);
        for class in [PairClass::VV, PairClass::VH, PairClass::HH] {
            assert!(rep.counts[&class].pairs > 0, "{}", class);
        }
    }

    #[test]
    fn empty_set_passes() {
        let rep = cross_check_list(&[], &[]);
        assert!(rep.is_clean());
        assert_eq!(rep.derivations, 0);
    }
}
