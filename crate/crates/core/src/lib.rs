//! Decorated planar graphs, their medial quivers, state lattices and state modules.

pub mod bms;
pub mod corpus;
pub mod error;
pub mod io;
pub mod kauffman;
pub mod lattice;
pub mod planar;
pub mod quiver_rep;
pub mod weights;

pub use error::{Error, Result};
