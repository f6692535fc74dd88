//! Essential dimension of finite p-groups.
//!
//! The crate computes the descending chain `K_i` of intersections of
//! field-relative derived subgroups over all subgroups of index `p^i`, the
//! induced filtration of the p-torsion of the center, and from it the
//! essential dimension. It also builds a witness faithful representation as a
//! sum of monomial (induced) representations and checks the result against
//! an exhaustive search.

pub mod bitset;
pub mod chains;
pub mod error;
pub mod fp;
pub mod group;
pub mod input;
pub mod lattice;
pub mod report;
pub mod reps;
pub mod suites;
pub mod zoo;

pub use error::{Error, Result};
pub use group::{direct_product, Elem, ElementaryAbelianView, FieldDescriptor, FiniteGroup, Subgroup};
