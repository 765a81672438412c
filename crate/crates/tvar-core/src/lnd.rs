//! Homogeneous locally nilpotent derivations acting on `Q(t)[M]`.
//!
//! Horizontal derivations are applied in the coordinates of the divisor they were
//! built from. With `q = t - z0` and `Phi^m = prod_{z != z0} (t - z)^{-<m, v_z>}`,
//!
//! ```text
//! D(t)       = d q^{s+1} Phi^e X^e
//! D(f X^m)   = d q^s Phi^e X^{m+e} (q f' + f L(m)),
//! L(m)       = <m, v_z0> + q sum_{z != z0} <m, v_z> / (t - z).
//! ```
//!
//! When every `v_z` with `z != z0` is zero this is `D(q^r X^m) = d (v_z0(m) + r) q^{r+s} X^{m+e}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lattice_geometry::linalg::{dot_zq, QVec};
use crate::pdivisor::PolyDivisor;
use crate::rational::Rational;
use crate::roots::{DemazureRoot, HorizontalData};
use crate::symexpr::{RatFun, SymExpr};

/// Default bound on iterated applications.
pub const DEFAULT_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LndError {
    #[error("phi is not a nonzero section of D(e)")]
    PhiNotInSpace,
    #[error("no power up to {cap} of the derivation annihilates the element")]
    CapExceeded { cap: u32 },
}

/// `D(f X^m) = <m, rho> phi f X^{m+e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalLnd {
    pub root: DemazureRoot,
    pub phi: RatFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Vertical(VerticalLnd),
    Horizontal(HorizontalData),
}

/// `phi != 0` and `div phi + D(e) >= 0`, with `D(e)` taken as the minimum over vertices.
pub fn in_phi(d: &PolyDivisor, e: &[i64], phi: &RatFun) -> bool {
    if phi.is_zero() {
        return false;
    }
    let de = d.evaluate_vertex_min(e);
    for z in phi.poles().chain(de.keys().copied()).collect::<alloc::collections::BTreeSet<_>>() {
        let ord = phi.order_at(z).expect("nonzero");
        let h = de.get(&z).copied().unwrap_or(Rational::ZERO);
        if Rational::from(ord) + h < Rational::ZERO {
            return false;
        }
    }
    true
}

/// `alpha_m = -sum_{z != 0} <m, v_z> t / (t - z)` and its derivative
/// `alpha'_m = sum_{z != 0} <m, v_z> z / (t - z)^2`.
pub fn alpha(shifts: &BTreeMap<Rational, QVec>, m: &[i64]) -> (RatFun, RatFun) {
    let mut a = RatFun::zero();
    let mut da = RatFun::zero();
    for (&z, v) in shifts {
        if z.is_zero() {
            continue;
        }
        let c = dot_zq(m, v);
        if c.is_zero() {
            continue;
        }
        a = a.sub(&RatFun::t().mul(&RatFun::linear_power(z, -1)).scale(c));
        da = da.add(&RatFun::linear_power(z, -2).scale(c * z));
    }
    (a, da)
}

impl Derivation {
    /// Builds a vertical derivation, rejecting `phi` outside `Phi_e`.
    pub fn vertical(d: &PolyDivisor, root: DemazureRoot, phi: RatFun) -> Result<Derivation, LndError> {
        if !in_phi(d, &root.e, &phi) {
            return Err(LndError::PhiNotInSpace);
        }
        Ok(Derivation::Vertical(VerticalLnd { root, phi }))
    }

    pub fn horizontal(h: HorizontalData) -> Derivation {
        Derivation::Horizontal(h)
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self, Derivation::Vertical(_))
    }

    pub fn degree(&self) -> &[i64] {
        match self {
            Derivation::Vertical(v) => &v.root.e,
            Derivation::Horizontal(h) => &h.e,
        }
    }

    pub fn apply(&self, x: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m, f) in x.parts() {
            out = out.add(&self.apply_homogeneous(m, f));
        }
        out
    }

    /// `D(f X^m)`.
    pub fn apply_homogeneous(&self, m: &[i64], f: &RatFun) -> SymExpr {
        match self {
            Derivation::Vertical(v) => {
                let k = crate::lattice_geometry::linalg::dot_zz(m, &v.root.ray);
                let target: Vec<i64> = m.iter().zip(&v.root.e).map(|(a, b)| a + b).collect();
                SymExpr::homogeneous(f.mul(&v.phi).scale(Rational::from(k)), target)
            }
            Derivation::Horizontal(h) => {
                let z0 = h.marked_point();
                let q = RatFun::linear_power(z0, 1);
                let bracket = q.mul(&f.derivative()).add(&f.mul(&horizontal_l(h, m)));
                let target: Vec<i64> = m.iter().zip(&h.e).map(|(a, b)| a + b).collect();
                SymExpr::homogeneous(horizontal_prefactor(h).mul(&bracket), target)
            }
        }
    }

    /// Whether the derivation annihilates `x`.
    pub fn kills(&self, x: &SymExpr) -> bool {
        self.apply(x).is_zero()
    }

    /// The weight-`m` kernel element: `X^m` for vertical derivations with `<m, rho> = 0`,
    /// and `prod (t - z)^{-<m, v_z>} X^m` for horizontal ones with `<m, v_z0>` integral.
    /// Membership of the result in the algebra is left to the caller.
    pub fn kernel_element(&self, m: &[i64]) -> Option<SymExpr> {
        match self {
            Derivation::Vertical(v) => (crate::lattice_geometry::linalg::dot_zz(m, &v.root.ray) == 0)
                .then(|| SymExpr::chi(m.to_vec())),
            Derivation::Horizontal(h) => {
                if !h.in_kernel_lattice(m) {
                    return None;
                }
                let mut f = RatFun::one();
                for (&z, v) in h.colored.chosen() {
                    let c = dot_zq(m, v).to_integer().expect("integral pairing") as i64;
                    f = f.mul(&RatFun::linear_power(z, -c));
                }
                Some(SymExpr::homogeneous(f, m.to_vec()))
            }
        }
    }

    /// Kernel test for a homogeneous element: facet condition for vertical
    /// derivations, proportionality to the kernel element for horizontal ones.
    pub fn kernel_membership(&self, x: &SymExpr) -> bool {
        if x.is_zero() {
            return true;
        }
        x.parts().iter().all(|(m, f)| match self.kernel_element(m) {
            None => false,
            Some(k) => match self {
                Derivation::Vertical(_) => true,
                Derivation::Horizontal(_) => {
                    let (_, g) = k.as_homogeneous().expect("homogeneous");
                    f.mul(&g.derivative()).sub(&f.derivative().mul(g)).is_zero()
                }
            },
        })
    }
}

fn join<T: core::fmt::Display>(xs: &[T]) -> alloc::string::String {
    xs.iter().map(|x| alloc::format!("{}", x)).collect::<Vec<_>>().join(",")
}

/// `vertical:e=[..];phi=<expr>` or `horizontal:z0=<q>;vertices={<q>:[..],...};e=[..]`.
impl core::fmt::Display for Derivation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Derivation::Vertical(v) => write!(f, "vertical:e=[{}];phi={}", join(&v.root.e), v.phi),
            Derivation::Horizontal(h) => {
                let verts: Vec<alloc::string::String> = h
                    .colored
                    .chosen()
                    .iter()
                    .map(|(z, v)| alloc::format!("{}:[{}]", z, join(v)))
                    .collect();
                write!(f, "horizontal:z0={};vertices={{{}}};e=[{}]", h.marked_point(), verts.join(","), join(&h.e))
            }
        }
    }
}

fn horizontal_l(h: &HorizontalData, m: &[i64]) -> RatFun {
    let z0 = h.marked_point();
    let q = RatFun::linear_power(z0, 1);
    let mut sum = RatFun::zero();
    for (&z, v) in h.colored.chosen() {
        if z == z0 {
            continue;
        }
        let c = dot_zq(m, v);
        if !c.is_zero() {
            sum = sum.add(&RatFun::linear_power(z, -1).scale(c));
        }
    }
    RatFun::constant(dot_zq(m, &h.marked_vertex())).add(&q.mul(&sum))
}

/// `d q^s Phi^e`.
fn horizontal_prefactor(h: &HorizontalData) -> RatFun {
    let z0 = h.marked_point();
    let mut f = RatFun::linear_power(z0, h.s).scale(Rational::from(h.d));
    for (&z, v) in h.colored.chosen() {
        if z == z0 {
            continue;
        }
        let c = dot_zq(&h.e, v).to_integer().expect("lattice vertex") as i64;
        f = f.mul(&RatFun::linear_power(z, -c));
    }
    f
}

/// Least `n <= cap` with `D^n(x) = 0`.
pub fn nilpotency_degree(d: &Derivation, x: &SymExpr, cap: u32) -> Result<u32, LndError> {
    let mut cur = x.clone();
    for n in 0..=cap {
        if cur.is_zero() {
            return Ok(n);
        }
        cur = d.apply(&cur);
    }
    Err(LndError::CapExceeded { cap })
}

/// `[x, D x, D^2 x / 2!, ...]` up to the last nonzero term.
pub fn exp_series(d: &Derivation, x: &SymExpr, cap: u32) -> Result<Vec<SymExpr>, LndError> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    let mut k: i128 = 0;
    while !cur.is_zero() {
        if k as u32 >= cap {
            return Err(LndError::CapExceeded { cap });
        }
        out.push(cur.clone());
        k += 1;
        cur = d.apply(&cur).scale(Rational::new(1, k));
    }
    Ok(out)
}

/// `exp(lambda D)(x) = sum lambda^k D^k(x) / k!`.
pub fn exponentiate(d: &Derivation, lambda: Rational, x: &SymExpr, cap: u32) -> Result<SymExpr, LndError> {
    let series = exp_series(d, x, cap)?;
    Ok(series
        .iter()
        .enumerate()
        .fold(SymExpr::zero(), |acc, (k, term)| acc.add(&term.scale(lambda.pow(k as u32)))))
}
