//! Bruhat order combinatorics for Coxeter groups.
//!
//! The crate works inside a *ball*: the finite set of all group elements of
//! length at most a chosen bound, enumerated from a Coxeter matrix. On top of
//! that it provides
//!
//! - canonical words and exact multiplication ([`coxeter`]),
//! - the Bruhat order, graded-poset export, and poset isomorphism ([`poset`]),
//! - R-polynomials and Kazhdan–Lusztig polynomials ([`poly`]),
//! - special matchings of lower Bruhat intervals: enumeration on dihedral
//!   groups, maximal extension, regularity, reducibility, and the rank-3
//!   obstruction analysis ([`matchings`]),
//! - executable verification suites over a corpus of small groups
//!   ([`verify`]).
//!
//! Results outside the ball are reported as errors, never silently truncated.

mod bitset;
mod error;

pub mod cache;
pub mod coxeter;
pub mod matchings;
pub mod poly;
pub mod poset;
pub mod verify;

pub use error::{Error, Result};
