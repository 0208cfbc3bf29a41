//! Exact geometry of flexible polyhedra.
//!
//! Coordinates are [`exactnum::ConstructibleReal`] values: rationals closed
//! under field operations and square roots, with certified signs.

pub mod constructions;
pub mod exactnum;
pub mod flex;
pub mod geometry;
pub mod intersect;
pub mod mesh;
