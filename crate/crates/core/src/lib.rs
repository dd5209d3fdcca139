//! Exact combinatorics of nef-partitions, reflexive Gorenstein cones and
//! toric double mirrors, together with a finite-field sampling harness for
//! the determinantal variety that connects two double-mirror complete
//! intersections.

pub mod corpus;
pub mod double_mirror;
pub mod error;
pub mod field;
pub mod gorenstein_cone;
pub mod laurent;
pub mod lattice;
pub mod nef_partition;
pub mod polytope;
pub mod verify;

pub use error::{Error, Result};
