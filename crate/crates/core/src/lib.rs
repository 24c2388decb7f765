//! Combinatorics of piecewise dominant sequences for cyclotomic quiver Hecke
//! algebras: Cartan data, graded dimensions, crystals and weight multiplicities.

pub mod cartan;
pub mod crystal;
pub mod gdim;
pub mod laurent;
pub mod multiplicity;
pub mod pdseq;
pub mod perm;

pub use cartan::{CartanDatum, CartanError, DatumSpec, DominantWeight, Residue, RootVector};
pub use laurent::LaurentPoly;
pub use perm::Permutation;
