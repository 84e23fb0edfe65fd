//! Numerics for the equatorial ("fat equator") concentration of measure on
//! round spheres, closed minimal submanifolds of spheres, and Riemannian
//! submersions with minimal fibers.
//!
//! The analytic layers ([`special`], [`sphere`], [`bounds`], [`moments`]) are
//! generic over the scalar type through [`Real`]; the moment recurrence also
//! runs over exact rationals. The sampling layers ([`manifolds`],
//! [`montecarlo`]) work in `f64`. Concrete aliases for the common case live at
//! the crate root.

// Negated comparisons are how the domain checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod manifolds;
pub mod moments;
pub mod montecarlo;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod sphere;

pub use error::{Error, Result};
pub use scalar::Real;

/// A point of `S^n(1)` in double precision.
pub type Point = sphere::SpherePoint<f64>;
/// An equatorial strip `Ω(p, ε)` in double precision.
pub type Strip = sphere::EquatorStrip<f64>;
/// Bound parameters in double precision.
pub type Params = bounds::BoundParams<f64>;
/// A bound report in double precision.
pub type Report = bounds::BoundReport<f64>;
/// Quadrature settings in double precision.
pub type Quadrature = special::QuadratureSpec<f64>;
/// Floating-point moment table.
pub type Moments = moments::MomentTable<f64>;
