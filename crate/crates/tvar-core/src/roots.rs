//! Demazure roots, associated cones of colored divisors, and coherent pairs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::lattice_geometry::inequalities::{self, Constraint, Relation};
use crate::lattice_geometry::linalg::{self, dot_zq, to_q, QVec};
use crate::lattice_geometry::Cone;
use crate::pdivisor::{ColoredDivisor, PolyDivisor};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("weight has rank {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
}

/// `e` with `<e, ray> = -1` and `e >= 0` on every other ray.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DemazureRoot {
    pub e: Vec<i64>,
    pub ray: Vec<i64>,
}

pub fn is_demazure_root(c: &Cone, e: &[i64]) -> Result<Option<DemazureRoot>, RootError> {
    if !c.is_pointed() {
        return Err(RootError::NotPointed);
    }
    if e.len() != c.dim() {
        return Err(RootError::Dimension { expected: c.dim(), found: e.len() });
    }
    let mut assoc = None;
    for r in c.rays() {
        match linalg::dot_zz(e, r) {
            -1 if assoc.is_none() => assoc = Some(r.clone()),
            x if x < 0 => return Ok(None),
            _ => {}
        }
    }
    Ok(assoc.map(|ray| DemazureRoot { e: e.to_vec(), ray }))
}

/// Lattice points of `[-b, b]^n` in lexicographic order.
pub fn lex_box(rank: usize, b: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..rank {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts
}

pub fn demazure_roots_in_box(c: &Cone, b: i64) -> Result<Vec<DemazureRoot>, RootError> {
    if !c.is_pointed() {
        return Err(RootError::NotPointed);
    }
    let mut out = Vec::new();
    for e in lex_box(c.dim(), b) {
        if let Some(r) = is_demazure_root(c, &e)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// `omega`, `omega_hat` and `d` of a colored divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedCone {
    pub omega: Cone,
    pub omega_hat: Cone,
    pub d: i64,
}

impl AssociatedCone {
    /// The distinguished ray `(d * v_z0, d)` of `omega_hat`.
    pub fn marked_ray(&self, cd: &ColoredDivisor) -> Vec<i64> {
        let v = cd.vertex(cd.marked_point());
        let d = Rational::from(self.d);
        let mut r: Vec<i64> = v.iter().map(|x| (*x * d).to_integer().expect("d clears denominators") as i64).collect();
        r.push(self.d);
        r
    }
}

pub fn associated_cone(cd: &ColoredDivisor) -> AssociatedCone {
    let omega = cd.base().degree_polyhedron().cone_at(&cd.v_deg());
    let v0 = cd.vertex(cd.marked_point());
    let omega_hat = omega_hat(&omega, &v0);
    AssociatedCone { omega, omega_hat, d: linalg::denominator_lcm(&v0) }
}

/// Cone over `omega x {0}` and `(v0, 1)`.
fn omega_hat(omega: &Cone, v0: &[Rational]) -> Cone {
    let n = omega.dim();
    let mut gens: Vec<QVec> = omega
        .rays()
        .iter()
        .map(|r| {
            let mut g = to_q(r);
            g.push(Rational::ZERO);
            g
        })
        .collect();
    let mut top = v0.to_vec();
    top.push(Rational::ONE);
    gens.push(top);
    Cone::new(n + 1, gens).expect("rank n + 1")
}

/// A coherent pair: the data of one horizontal derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalData {
    pub colored: ColoredDivisor,
    pub e: Vec<i64>,
    pub s: i64,
    pub d: i64,
    pub omega: Cone,
    pub omega_hat: Cone,
}

impl HorizontalData {
    pub fn marked_point(&self) -> Rational {
        self.colored.marked_point()
    }

    /// `v_z0`.
    pub fn marked_vertex(&self) -> QVec {
        self.colored.vertex(self.colored.marked_point())
    }

    /// The same weight on `cd`, which must be this coloring translated and shifted by
    /// lattice vectors. Such moves preserve coherence, so only `s` and `omega_hat` change.
    pub fn moved_to(&self, cd: ColoredDivisor) -> HorizontalData {
        let v0 = cd.vertex(cd.marked_point());
        let s = -Rational::from(self.d).recip() - dot_zq(&self.e, &v0);
        let s = s.to_integer().expect("lattice moves keep s integral") as i64;
        let omega_hat = omega_hat(&self.omega, &v0);
        HorizontalData { colored: cd, e: self.e.clone(), s, d: self.d, omega: self.omega.clone(), omega_hat }
    }

    /// Kernel lattice test `<m, v_z0>` integral.
    pub fn in_kernel_lattice(&self, m: &[i64]) -> bool {
        dot_zq(m, &self.marked_vertex()).is_integer()
    }
}

/// The first violated coherence condition.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoherenceFailure {
    #[error("weight has rank {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("s = -1/d - <v_z0, e> = {0} is not an integer")]
    NonIntegralS(Rational),
    #[error("(e, s) is negative on the ray {ray:?} of the associated cone")]
    NotARoot { ray: Vec<i64> },
    #[error("vertex {vertex:?} at point {point} violates v(e) >= 1 + v_z(e)")]
    UnmarkedVertex { point: Rational, vertex: QVec },
    #[error("vertex {vertex:?} at the marked point violates d v(e) >= 1 + d v_z0(e)")]
    MarkedVertex { vertex: QVec },
}

pub fn is_coherent_pair(cd: &ColoredDivisor, e: &[i64]) -> Result<HorizontalData, CoherenceFailure> {
    let n = cd.base().rank();
    if e.len() != n {
        return Err(CoherenceFailure::Dimension { expected: n, found: e.len() });
    }
    let ac = associated_cone(cd);
    let z0 = cd.marked_point();
    let d = Rational::from(ac.d);
    let s = -d.recip() - dot_zq(e, &cd.vertex(z0));
    let Some(s_int) = s.to_integer() else {
        return Err(CoherenceFailure::NonIntegralS(s));
    };
    let mut ehat = e.to_vec();
    ehat.push(s_int as i64);
    let marked = ac.marked_ray(cd);
    for r in ac.omega_hat.rays() {
        let p = linalg::dot_zz(&ehat, r);
        if (*r == marked && p != -1) || (*r != marked && p < 0) {
            return Err(CoherenceFailure::NotARoot { ray: r.clone() });
        }
    }
    for (&z, p) in cd.base().coefficients() {
        let vz = cd.vertex(z);
        let base = dot_zq(e, &vz);
        for v in p.vertices() {
            if *v == vz {
                continue;
            }
            let val = dot_zq(e, v);
            if z == z0 {
                if d * val < Rational::ONE + d * base {
                    return Err(CoherenceFailure::MarkedVertex { vertex: v.clone() });
                }
            } else if val < Rational::ONE + base {
                return Err(CoherenceFailure::UnmarkedVertex { point: z, vertex: v.clone() });
            }
        }
    }
    Ok(HorizontalData { colored: cd.clone(), e: e.to_vec(), s: s_int as i64, d: ac.d, omega: ac.omega, omega_hat: ac.omega_hat })
}

/// Linear system in `(e_1, .., e_n, s)` whose integer solutions are the coherent weights.
pub fn family_system(cd: &ColoredDivisor) -> Vec<Constraint> {
    let n = cd.base().rank();
    let ac = associated_cone(cd);
    let z0 = cd.marked_point();
    let d = Rational::from(ac.d);
    let v0 = cd.vertex(z0);
    let mut cs = Vec::new();
    let mut eq: QVec = v0.iter().map(|x| *x * d).collect();
    eq.push(d);
    cs.push(Constraint::new(eq, Relation::Eq, -Rational::ONE));
    for r in ac.omega.rays() {
        let mut c = to_q(r);
        c.push(Rational::ZERO);
        cs.push(Constraint::new(c, Relation::Ge, Rational::ZERO));
    }
    for (&z, p) in cd.base().coefficients() {
        let vz = cd.vertex(z);
        let scale = if z == z0 { d } else { Rational::ONE };
        for v in p.vertices() {
            if *v == vz {
                continue;
            }
            let mut c: QVec = linalg::sub(v, &vz).into_iter().map(|x| x * scale).collect();
            c.push(Rational::ZERO);
            cs.push(Constraint::new(c, Relation::Ge, Rational::ONE));
        }
    }
    inequalities::reduce(&cs, n + 1)
}

/// All vertex choices of a divisor with a canonical marked point: the non-lattice
/// vertex if there is one, otherwise the smallest support point (or `0`).
pub fn canonical_colorings(d: &PolyDivisor) -> Vec<ColoredDivisor> {
    let mut out = Vec::new();
    for choice in ColoredDivisor::vertex_choices(d) {
        let nonlattice: Vec<Rational> =
            choice.iter().filter(|(_, v)| !linalg::is_integral(v)).map(|(&z, _)| z).collect();
        let z0 = match nonlattice.as_slice() {
            [] => d.points().first().copied().unwrap_or(Rational::ZERO),
            [z] => *z,
            _ => continue,
        };
        if let Ok(c) = ColoredDivisor::new(d.clone(), choice, z0) {
            out.push(c);
        }
    }
    out
}

/// Marked points a coloring may use: the forced one, or every support point.
pub fn marked_point_choices(cd: &ColoredDivisor) -> Vec<Rational> {
    if !cd.is_integral() {
        return vec![cd.marked_point()];
    }
    let pts = cd.base().points();
    if pts.is_empty() {
        vec![Rational::ZERO]
    } else {
        pts
    }
}

/// One coloring together with its defining system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalFamily {
    pub id: usize,
    pub colored: ColoredDivisor,
    pub system: Vec<Constraint>,
    pub d: i64,
}

pub fn horizontal_families(d: &PolyDivisor) -> Vec<HorizontalFamily> {
    canonical_colorings(d)
        .into_iter()
        .enumerate()
        .map(|(id, colored)| {
            let system = family_system(&colored);
            let d = associated_cone(&colored).d;
            HorizontalFamily { id, colored, system, d }
        })
        .collect()
}

/// Every coherent pair with `|e_i| <= b`, grouped by family in family order.
pub fn enumerate_horizontal(d: &PolyDivisor, b: i64) -> Vec<(usize, HorizontalData)> {
    let mut out = Vec::new();
    for fam in horizontal_families(d) {
        for e in lex_box(d.rank(), b) {
            if let Ok(h) = is_coherent_pair(&fam.colored, &e) {
                out.push((fam.id, h));
            }
        }
    }
    out
}

/// Renders a family system with the given names, one constraint per entry.
pub fn render_system(cs: &[Constraint], names: &[&str]) -> Vec<alloc::string::String> {
    cs.iter().map(|c| c.render(names)).collect()
}

/// Chosen vertices keyed by point, for callers that build colorings by hand.
pub fn vertices_map(entries: &[(Rational, QVec)]) -> BTreeMap<Rational, QVec> {
    entries.iter().cloned().collect()
}
