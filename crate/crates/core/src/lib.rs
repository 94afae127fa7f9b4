//! Linear recursions for determinant families of graph-Laplacian minors.
//!
//! The pipeline expands a family of minors along first rows and columns
//! ([`expansion`]), eliminates the resulting identity system to a single
//! annihilating shift-operator polynomial ([`reduction`]), shrinks it to the
//! minimal recursion of each determinant sequence ([`recurrence`]), and turns
//! those into Binet forms and resistance-distance asymptotics ([`binet`]).
//! [`oracle`] supplies independent exact determinants and resistances.

pub mod binet;
pub mod cli;
pub mod expansion;
pub mod families;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod recurrence;
pub mod reduction;
pub mod shift_poly;

pub use families::{FamilyHandle, FamilySpec};
pub use shift_poly::{CharPoly, Sequence, ShiftPoly};
