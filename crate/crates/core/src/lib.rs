//! Decomposition of inverse subsemigroups of the symmetric inverse monoid and
//! its dual into orbits, zero-direct summands and Schein sums, together with
//! embedding degree searches.

pub mod algebra;
pub mod corpus;
pub mod dual_sym;
pub mod embed;
pub mod error;
pub mod homsearch;
pub mod lemmas;
mod notation;
pub mod orbits;
pub mod report;
pub mod schein;
pub mod subsemigroup;
pub mod sym;
pub mod table;
pub mod zero_direct;

pub use algebra::{Family, InverseAlgebra};
pub use dual_sym::{BlockBijection, DualSymInv};
pub use error::{AlgebraError, InvariantViolation, ParseError};
pub use subsemigroup::Subsemigroup;
pub use sym::{PartialInjection, SymInv};
pub use table::{CarrierTable, CayleyTable, TableError};
