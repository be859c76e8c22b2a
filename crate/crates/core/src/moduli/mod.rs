//! Cells of the moduli space, their faces, and the assembled cell complex.

mod complex;
mod enumerate;
mod faces;
mod json;
mod locate;
mod subdivide;

pub use complex::{build_complex, Cell, CellComplex, CellShape, FaceEntry};
pub use enumerate::{compositions, enumerate_top_cells, perfect_matchings};
pub use faces::{degenerate, face, face_descriptors, faces, permutation_sign, CoordMap, Face, FaceDescriptor};
pub use locate::locate_cell;
pub use subdivide::{subdivide, SubCell, Subdivision};
pub use json::{
    cache_dir, cache_file, load_or_build, BoundaryJson, CellJson, ComplexFlags, ComplexJson, Provenance, CACHE_ENV, COMPLEX_SCHEMA,
};
