//! Numeric kernels: univariate root finding and small affine linear solves.

mod linear;
mod roots;

pub use linear::{affine_system, solve_affine, LinearSystem, Solution};
pub use roots::{roots_all, roots_all_exact, roots_simple, Root, UniPoly};
