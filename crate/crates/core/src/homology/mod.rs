//! Exact integral linear algebra and normalized chains on products of simplices.

mod chains;
mod json;
mod matrix;
mod reduce;
mod snf;
mod summary;

pub use chains::{
    boundary_of_chain, ez_boundary_rhs, ez_fundamental_chain, ez_lemma_holds, is_degenerate, lemma_shapes, FormalChain,
    GridPoint, Simplex,
};
pub use json::{ClassStats, ComplexKind, HomologyJson, SubdivisionCheck, HOMOLOGY_SCHEMA};
pub use matrix::{dense_mul, Dense, IntegerMatrix};
pub use reduce::{betti_from_ranks, rational_boundary_ranks, Column};
pub use snf::{determinant, invariant_factors, rank_mod_p, rank_rational, smith_normal_form, SmithForm};
pub use summary::{homology_summary, is_prime, Coeffs, DegreeHomology, HomologySummary};
