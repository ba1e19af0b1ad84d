//! Hankel determinants and Zalcman functionals on the starlike, convex,
//! bounded-turning and close-to-convex harmonic classes of order alpha.
//!
//! Coefficients are parametrized by Carathéodory coefficients `p1..p4`.
//! The coefficient maps and functionals are generic over [`ring::Ring`], so
//! the same code runs on floats, complex numbers, exact rationals and exact
//! polynomials.

pub mod bounds;
pub mod caratheodory;
pub mod coeffs;
pub mod error;
pub mod functionals;
pub mod polyid;
pub mod report;
pub mod ring;
pub mod search;

pub use error::{Error, Result};
