//! Exact numerical invariants of surfaces and orbifold pairs.
//!
//! The crate models a smooth projective surface purely through its
//! intersection lattice, canonical class and Chern numbers, and builds on
//! that model:
//!
//! - [`lattice`]: intersection pairing, point blowups, adjunction genus.
//! - [`covers`]: Chern numbers of cyclic branched covers, the double cover
//!   of P¹×P¹ used as a base surface, and the positivity conditions P1/P2.
//! - [`btsearch`]: certified parameter search over the `(k, a, b, m)` family
//!   of blown-up double covers carrying an orbifold divisor.
//! - [`orbdiff`]: orbifold symmetric differentials: pole exponents,
//!   quotient-sheaf bounds, log Chern numbers, Riemann–Roch polynomials and
//!   certified lower bounds for section counts.
//! - [`contact`]: truncated power series and contact orders of curve germs.
//!
//! All arithmetic is exact. Integers are [`num_bigint::BigInt`], rationals
//! are [`num_rational::BigRational`], and there is no floating point.

pub mod assumptions;
pub mod btsearch;
pub mod contact;
pub mod covers;
mod error;
pub mod exact;
pub mod lattice;
pub mod orbdiff;
pub mod poly;

pub use assumptions::Assumption;
pub use error::{Error, Result};
pub use lattice::{DivisorClass, SurfaceModel};
pub use poly::BoundPolynomial;
