//! Monodromy models of Prym towers and the polygonal constructions between them.
//!
//! Covers of a base curve are stored as monodromy tuples; double covers over
//! them as tuples of signed permutations. The bigonal, trigonal and tetragonal
//! constructions act on these tuples through the section representation.
//! Alongside sit the F₂ quadratic-form toolkit for theta characteristics and
//! the line configurations of low-degree del Pezzo surfaces.

pub mod cover;
pub mod delpezzo;
pub mod error;
pub mod f2;
pub mod group;
pub mod instances;
pub mod perm;
pub mod polygonal;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};
pub use perm::{compose, Perm};
pub use weyl::SignedPerm;
