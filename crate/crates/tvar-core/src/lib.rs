//! Exact combinatorics for affine T-varieties of complexity one over the affine line.
//!
//! A variety is given by a proper polyhedral divisor on `A^1`. From it this crate
//! computes weight spaces and algebra generators, enumerates the homogeneous locally
//! nilpotent derivations of vertical and horizontal type, decides whether two of them
//! commute from combinatorial data alone, and checks every such decision against a
//! symbolic commutator evaluated on generators.
//!
//! All arithmetic is exact over the rationals. The crate is `no_std` with `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod commute;
pub mod lattice_geometry;
pub mod lnd;
pub mod oracle;
pub mod pdivisor;
pub mod rational;
pub mod roots;
pub mod symexpr;

pub use lattice_geometry::{Cone, GeometryError, Polyhedron};
pub use rational::Rational;
pub use symexpr::{Poly, RatFun, SymExpr};
