//! Exact-rational geometry on the Grassmannian `G(n, k)` and the affine
//! Grassmannian `A(n, k)`.
//!
//! Subspaces are represented by their rational orthogonal projection
//! matrices, which makes membership and equality decidable. On top of that
//! substrate the crate provides certified metric computations (dyadic
//! enclosures of provable width), separated covering nets, box-counting
//! dimension estimation, and an experiment harness that checks dimension
//! bounds for unions and extensions of plane families.

pub mod affine;
pub mod dimest;
pub mod exact;
pub mod experiments;
pub mod grassmann;
pub mod nets;
