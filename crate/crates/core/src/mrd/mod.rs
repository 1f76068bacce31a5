//! The census of two-dimensional MRD codes in F_{q^4}^4 through a fixed
//! rank-4 vector, and the formulas that turn it into the total count and
//! into the conditional characteristic polynomial of the rank-2 lattice.

mod census;
mod formulas;

pub use census::*;
pub use formulas::*;
