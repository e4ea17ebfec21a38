//! Odd-distance graphs in the plane: exact constructions, lattice triangle enumeration,
//! SAT-based k-coloring and reduction.

pub mod field;
pub mod geom;
pub mod tri;
pub mod build;
pub mod chroma;
pub mod reduce;
pub mod io;
pub mod svg;
