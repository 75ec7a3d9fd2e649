//! Exact symbolic-numeric analysis of algebraic curves and surfaces at
//! singular and regular points.
//!
//! Given an implicit plane curve `F(x, y) = 0`, surface `F(x, y, z) = 0`, or
//! space curve `F = G = 0` with rational coefficients, the crate computes the
//! multiplicity of a point, the tangent directions (or tangent planes) with
//! multiplicity, and per-branch curvature (Gaussian/mean curvature for
//! surfaces, curvature and torsion for space curves). Each branch is resolved
//! by matching the Taylor coefficients of `F` composed with a low-order
//! parametric jet through the point.
//!
//! Module map:
//!
//! * [`ratpoly`] – sparse multivariate polynomials over ℚ (and over ℂ floats)
//! * [`parse`] – text → polynomial
//! * [`numkit`] – univariate root finding and affine linear solves
//! * [`singular`] – multiplicity, tangent directions, tangent planes
//! * [`plane`], [`surface`], [`space`] – branch-wise curvature solvers
//! * [`oracle`] – independent numeric branch tracing used for verification
//! * [`cli`] – report types and the command-line front end

pub mod cli;
pub mod error;
pub mod numkit;
pub mod oracle;
pub mod parse;
pub mod plane;
pub mod ratpoly;
pub mod singular;
pub mod space;
pub mod surface;

mod geom;

pub use error::{Error, Result};
pub use parse::parse_poly;
pub use ratpoly::{ComplexValue, Monomial, Poly, RatPoly, Rational};
pub use singular::ProjDirection;
