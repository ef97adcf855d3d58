//! 2-adic L-function data for quartic cyclic extensions K/F of real
//! quadratic fields that are dihedral over ℚ, and the congruence checks
//! ρ_{F,S} ∈ 8ℤ₂, D(T) ∈ 32ℤ₂[[T]].

pub mod error;
pub mod padic;
pub mod series;
pub mod rationals;
pub mod quadfield;
pub mod rayclass;
pub mod zetavalues;
pub mod measures;
pub mod lseries;
pub mod dihedralalgebra;
pub mod corpus;

pub use error::{Error, Result};
pub use padic::{PAdic, PAdicGaussian, PAdicQuad};
pub use corpus::CorpusRow;
pub use lseries::{Backend, CharacterSelector, ContextOptions, Convention, LContext, VerdictReport};
pub use measures::MomentTable;
pub use series::TruncSeries;
