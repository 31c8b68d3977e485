//! Equally spaced points of convex face coverings of a simplex.
//!
//! Given an n-simplex `S` and closed convex sets `A^0, .., A^n` inside it with
//! `A^i` containing the face opposite vertex `i`, there is a point `v` of `S`
//! at a common distance `eps0 >= 0` from every `A^i`; for `eps0 > 0` the point
//! is unique and the sets leave part of `S` uncovered.
//!
//! The crate computes `eps0` and `v` by bisection over epsilon-hulls with
//! Dykstra's projections ([`equispace::solve`]), deforms face families toward
//! a covering ([`homotopy`]), checks the covering and Helly-type criteria for
//! larger families ([`covering`]), and cross-checks everything against a brute
//! force barycentric grid ([`grid`]).

pub mod body;
pub mod covering;
pub mod equispace;
pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod grid;
pub mod homotopy;
pub mod instance;
pub mod numfmt;
pub mod point;
pub mod simplex;

pub use body::{blend, epsilon_hull, ConvexBody};
pub use equispace::{solve, EquispaceResult, HFamily};
pub use error::{Error, Result};
pub use point::{point, Point};
pub use simplex::{Face, Simplex};
