//! Lines, rulings and roots on del Pezzo surfaces, the exceptional Lie
//! algebras they span, and exact verification of their branching rules.

pub mod branching;
pub mod census;
pub mod error;
pub mod graph;
pub mod liealg;
pub mod linalg;
pub mod picard;
pub mod rootsys;
pub mod verify;

pub use error::{Error, Result};
pub use picard::{DivisorClass, PicardLattice};
