//! Exact conversion between inequality and generator descriptions of
//! polyhedral cones and polyhedra.

#[cfg(feature = "cli")]
pub mod cli;
pub mod cone;
pub mod error;
pub mod format;
pub mod linalg;
pub mod polyhedron;
pub mod verify;

pub use error::{Error, Result};
