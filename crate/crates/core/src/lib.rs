//! Generalized polygons over small finite fields, distance-j ovoids as exact
//! hitting sets, and the classification / extension pipeline for
//! distance-2 ovoids of the dual split Cayley hexagon H(q)^D.

pub mod constructions;
pub mod cover;
pub mod error;
pub mod field;
pub mod geometry;
pub mod group;
pub mod pipeline;

pub use error::{Error, Result};
