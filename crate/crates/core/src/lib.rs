//! Polyhedral maps on closed surfaces: validation and invariants,
//! semi-equivelar type arithmetic, exhaustive classification, cyclic covers
//! by cut-and-glue, and automorphism groups.

pub mod arith;
pub mod catalog;
pub mod classify;
pub mod codec;
pub mod complex;
pub mod covering;
pub mod exec;
pub mod map;
pub mod perm;
pub mod symmetry;
pub mod vertex_type;

#[cfg(test)]
pub(crate) mod fixtures;

pub use exec::Exec;
pub use map::{MapError, PolyhedralMap};
pub use perm::VertexPermutation;
pub use symmetry::{AutGroup, Certificate, GroupId};
pub use vertex_type::{TypeError, VertexType};
