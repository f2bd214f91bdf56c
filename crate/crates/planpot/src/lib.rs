//! Planar potential theory toolkit.
//!
//! Computes logarithmic, Green and Dirichlet capacities, Green functions and
//! capacity potentials on masked finite-difference grids, Bergman kernels by
//! Gram-matrix orthonormalization, and capacity-density indices of domain
//! boundaries, together with the decay and growth laws they control.

pub mod bergman;
pub mod capacity;
pub mod density;
pub mod error;
pub mod geometry;
pub mod potential;
pub mod verify;

pub use error::{Error, Result};
