//! Generalized Minkowski functional of convex bodies, its level sets, the
//! measure of symmetry, and Chebyshev-type polynomial extremal problems.

pub mod bodies;
pub mod chebyshev;
pub mod convex;
pub mod error;
pub mod gauge;
pub mod oracles;

pub use convex::body::{Body, HPolytope, SupportOracle, VPolytope};
pub use convex::vector::Vector;
pub use convex::{Estimate, Exactness};
pub use error::{Error, Result};
