//! Exact construction and growth analysis of rank-1 valuation semigroups.
//!
//! A semigroup is given by finitely many positive rational generators. All
//! membership and counting happens on an integer grid `{k / D}`, where `D` is
//! the common denominator of the generators, so every count is exact.

pub mod error;
pub mod families;
pub mod geometry;
pub mod growth;
pub mod lattice;
pub mod par;
pub mod plane;
pub mod rational;
pub mod semigroup;

pub use error::{Error, Result};
pub use par::Execution;
pub use rational::{parse_list, rat, Rational};
pub use semigroup::{CountRow, CountTable, SemigroupSpec};
