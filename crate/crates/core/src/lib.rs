//! Finite ℤ₂-graded rings (trivial extensions and triangular matrix rings),
//! exhaustive checkers for Jordan superderivations and super-biderivations,
//! decomposition procedures for both, and a brute-force enumeration oracle
//! that cross-checks them at desk scale.

pub mod abelian;
pub mod axioms;
pub mod enumerate;
pub mod error;
pub mod finring;
pub mod graded;
pub mod maps;
pub mod structure;
pub mod suite;
pub mod verdict;

pub use error::{Error, Result};

/// Default cap on ring orders and on enumeration candidate counts.
pub const DEFAULT_BOUND: u64 = 4096;
