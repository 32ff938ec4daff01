//! Exact arithmetic in the Baumslag–Solitar monoid BS⁺(1,n), sums of dilates of
//! integer sets, and exhaustive verification of small-doubling bounds.
//!
//! Layout:
//!
//! - [`element`]: normal-form elements `b^m a^x` and their product.
//! - [`intset`]: finite integer sets, sumsets and sums of dilates.
//! - [`monoid_set`]: finite subsets of BS⁺(1,n) as coset decompositions.
//! - [`structure`]: length, holes, gcd normalisation, residue classes and
//!   classification of the extremal sets for `|A + 3·A| = 4|A| - 4`.
//! - [`theorems`]: evaluation of each bound on a concrete input.
//! - [`search`]: deterministic parallel enumeration and randomized hunting.

pub mod element;
pub mod error;
pub mod intset;
pub mod monoid_set;
pub mod search;
pub mod serde_int;
pub mod structure;
pub mod theorems;

mod lex;

pub use element::{commutes, multiply, power, GroupParams, MonoidElement};
pub use error::{Error, Result};
pub use intset::{affine_image, dilate, dilate_sum, sumset, IntSet};
pub use monoid_set::{CosetProfile, MonoidSet};
pub use search::{Instance, ScanReport, SearchSpec};
pub use structure::{ExtremalClass, ExtremalTag, StructureReport};
pub use theorems::{BoundVerdict, TheoremId};
