//! Cones, polyhedra and support functions in small rank.
//!
//! Vectors of `N_Q` and `M_Q` are plain `Vec<Rational>`; lattice vectors are `Vec<i64>`.
//! A [`Cone`] keeps its primitive irredundant rays together with the rays of its dual,
//! which double as an inequality description. All conversions between the two go
//! through exhaustive enumeration of tight constraint subsets, which is exact and cheap
//! up to rank 5 (the associated cones live one rank above the lattice).

pub mod inequalities;
pub mod linalg;

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::rational::Rational;
pub use inequalities::{Constraint, Relation};
pub use linalg::QVec;
use linalg::{dot, dot_zq, primitive_ray, to_q};

pub type LatticeVector = Vec<i64>;
pub type RationalVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("functional is not bounded below on the polyhedron")]
    Unbounded,
    #[error("polyhedron needs at least one vertex")]
    Empty,
}

fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeometryError::Dimension { expected, found })
    }
}

/// `<m, p>` for `m` in `M_Q`, `p` in `N_Q`.
pub fn pairing(m: &[Rational], p: &[Rational]) -> Result<Rational, GeometryError> {
    check_dim(m.len(), p.len())?;
    Ok(dot(m, p))
}

/// Divides a nonzero lattice vector by the gcd of its coordinates.
pub fn primitive(v: &[i64]) -> Result<LatticeVector, GeometryError> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return Err(GeometryError::ZeroVector);
    }
    Ok(v.iter().map(|&x| x / g).collect())
}

/// Primitive rays of `{x : <row, x> >= 0 for every row}` in dimension `n`.
///
/// The lineality space contributes `±b` for each basis vector `b`; the pointed part
/// contributes one ray per extreme direction.
fn rays_of_h_cone(n: usize, rows: &[QVec]) -> Vec<LatticeVector> {
    let lineality = linalg::nullspace(rows, n);
    let k = lineality.len();
    let mut rays: Vec<LatticeVector> = Vec::new();
    if k < n {
        let need = n - k - 1;
        for subset in linalg::subsets(rows.len(), need) {
            let mut eqs: Vec<QVec> = subset.iter().map(|&i| rows[i].clone()).collect();
            eqs.extend(lineality.iter().cloned());
            let sol = linalg::nullspace(&eqs, n);
            if sol.len() != 1 {
                continue;
            }
            let u = &sol[0];
            let sign = if rows.iter().all(|r| !dot(r, u).is_negative()) {
                Rational::ONE
            } else if rows.iter().all(|r| !dot(r, u).is_positive()) {
                -Rational::ONE
            } else {
                continue;
            };
            let ray = primitive_ray(&linalg::scale(sign, u)).expect("nonzero nullspace vector");
            if !rays.contains(&ray) {
                rays.push(ray);
            }
        }
    }
    for b in &lineality {
        let r = primitive_ray(b).expect("nonzero basis vector");
        let neg: LatticeVector = r.iter().map(|x| -x).collect();
        for v in [r, neg] {
            if !rays.contains(&v) {
                rays.push(v);
            }
        }
    }
    rays.sort();
    rays
}

/// A rational polyhedral cone. Equality is as sets, whatever generators it was built from.
#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    generators: Vec<RationalVector>,
    rays: Vec<LatticeVector>,
    dual_rays: Vec<LatticeVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && self.rays.iter().all(|r| other.contains_lattice(r))
            && other.rays.iter().all(|r| self.contains_lattice(r))
    }
}

impl Eq for Cone {}

impl Cone {
    /// Cone generated by the given vectors in `Q^dim`.
    pub fn new(dim: usize, generators: Vec<RationalVector>) -> Result<Cone, GeometryError> {
        for g in &generators {
            check_dim(dim, g.len())?;
        }
        let gens: Vec<QVec> = generators.iter().filter(|g| !linalg::is_zero(g)).cloned().collect();
        let dual_rays = rays_of_h_cone(dim, &gens);
        let dual_rows: Vec<QVec> = dual_rays.iter().map(|r| to_q(r)).collect();
        let rays = rays_of_h_cone(dim, &dual_rows);
        Ok(Cone { dim, generators, rays, dual_rays })
    }

    pub fn from_lattice(dim: usize, generators: &[LatticeVector]) -> Result<Cone, GeometryError> {
        Cone::new(dim, generators.iter().map(|g| to_q(g)).collect())
    }

    /// The cone `{0}`.
    pub fn zero(dim: usize) -> Cone {
        Cone::new(dim, Vec::new()).expect("empty generator list")
    }

    /// The nonnegative orthant.
    pub fn orthant(dim: usize) -> Cone {
        let gens = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rational::ONE } else { Rational::ZERO }).collect())
            .collect();
        Cone::new(dim, gens).expect("orthant")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    /// Primitive irredundant rays. A non-pointed cone lists `±b` for a lineality basis.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Inward normals: `v` lies in the cone iff `<u, v> >= 0` for all of them.
    pub fn dual_rays(&self) -> &[LatticeVector] {
        &self.dual_rays
    }

    pub fn dual(&self) -> Cone {
        Cone::new(self.dim, self.dual_rays.iter().map(|r| to_q(r)).collect())
            .expect("dual rays have the cone's dimension")
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.dim && self.dual_rays.iter().all(|u| !dot_zq(u, v).is_negative())
    }

    pub fn contains_lattice(&self, v: &[i64]) -> bool {
        self.contains(&to_q(v))
    }

    pub fn is_pointed(&self) -> bool {
        let rows: Vec<QVec> = self.dual_rays.iter().map(|r| to_q(r)).collect();
        linalg::rank(&rows, self.dim) == self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// Same cone as a point set; the same as `==`.
    pub fn same_as(&self, other: &Cone) -> bool {
        self == other
    }
}

/// A polyhedron `conv(vertices) + recession`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    vertices: Vec<RationalVector>,
    recession: Cone,
}

impl Polyhedron {
    /// Builds the polyhedron and keeps only the true vertices among `points`.
    pub fn new(points: Vec<RationalVector>, recession: Cone) -> Result<Polyhedron, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        for p in &points {
            check_dim(recession.dim(), p.len())?;
        }
        let mut uniq: Vec<RationalVector> = Vec::new();
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        let raw = Polyhedron { vertices: uniq.clone(), recession };
        let mut vertices: Vec<RationalVector> =
            uniq.into_iter().filter(|v| raw.is_vertex(v)).collect();
        vertices.sort();
        Ok(Polyhedron { vertices, recession: raw.recession })
    }

    /// The polyhedron `point + cone`.
    pub fn translated_cone(point: RationalVector, cone: Cone) -> Result<Polyhedron, GeometryError> {
        Polyhedron::new(vec![point], cone)
    }

    pub fn dim(&self) -> usize {
        self.recession.dim()
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn recession_cone(&self) -> &Cone {
        &self.recession
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        let mut gens: Vec<QVec> = self
            .vertices
            .iter()
            .map(|w| {
                let mut h = w.clone();
                h.push(Rational::ONE);
                h
            })
            .collect();
        for r in self.recession.rays() {
            let mut h = to_q(r);
            h.push(Rational::ZERO);
            gens.push(h);
        }
        let mut target = v.to_vec();
        target.push(Rational::ONE);
        Cone::new(self.dim() + 1, gens).expect("homogenization").contains(&target)
    }

    /// True iff some linear functional attains its minimum over the polyhedron only at `v`.
    pub fn is_vertex(&self, v: &[Rational]) -> bool {
        if !self.contains(v) {
            return false;
        }
        let mut gens: Vec<QVec> = self.vertices.iter().map(|w| linalg::sub(w, v)).collect();
        gens.extend(self.recession.rays().iter().map(|r| to_q(r)));
        Cone::new(self.dim(), gens).expect("tangent cone").is_pointed()
    }

    /// Minimum of `<m, .>` over the vertices, without checking boundedness.
    pub fn vertex_min(&self, m: &[Rational]) -> Rational {
        self.vertices.iter().map(|v| dot(m, v)).min().expect("nonempty vertex list")
    }

    /// The support function `h(m) = min <m, P>`; requires `m` in the dual of the recession cone.
    pub fn support(&self, m: &[Rational]) -> Result<Rational, GeometryError> {
        check_dim(self.dim(), m.len())?;
        if !self.recession.rays().iter().all(|r| !dot_zq(r, m).is_negative()) {
            return Err(GeometryError::Unbounded);
        }
        Ok(self.vertex_min(m))
    }

    pub fn support_lattice(&self, m: &[i64]) -> Result<Rational, GeometryError> {
        self.support(&to_q(m))
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron, GeometryError> {
        check_dim(self.dim(), other.dim())?;
        let mut gens: Vec<QVec> = self.recession.rays().iter().map(|r| to_q(r)).collect();
        gens.extend(other.recession.rays().iter().map(|r| to_q(r)));
        let cone = Cone::new(self.dim(), gens)?;
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(linalg::add(a, b));
            }
        }
        Polyhedron::new(pts, cone)
    }

    /// `P - v`.
    pub fn shifted(&self, v: &[Rational]) -> Polyhedron {
        let vertices = self.vertices.iter().map(|w| linalg::sub(w, v)).collect();
        Polyhedron { vertices, recession: self.recession.clone() }
    }

    /// Cone generated by `P - v` (the tangent cone at a vertex `v`).
    pub fn cone_at(&self, v: &[Rational]) -> Cone {
        let mut gens: Vec<QVec> = self.vertices.iter().map(|w| linalg::sub(w, v)).collect();
        gens.extend(self.recession.rays().iter().map(|r| to_q(r)));
        Cone::new(self.dim(), gens).expect("same dimension")
    }
}
