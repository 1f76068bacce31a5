//! Rank-metric lattices of F_{q^m}-subspaces, their Möbius invariants and
//! characteristic polynomials, the census of two-dimensional MRD codes in
//! F_{q^4}^4, and lattice-rank weights of rank-metric codes.

pub mod error;
pub mod field;
pub mod lattice;
pub mod mrd;
pub mod poly;
pub mod ser;
pub mod subspace;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
