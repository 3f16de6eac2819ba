//! Isomorphism testing and canonical forms for finite solvable groups given
//! by Cayley tables.

pub mod bench;
pub mod bitset;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod families;
pub mod graph;
pub mod graphenc;
pub mod graphiso;
pub mod group;
pub mod ordering;
pub mod series;
pub mod sylow;

pub use bitset::Bitset;
pub use error::{Error, Result};
pub use group::{factorize, GroupTable, PrimeFactorization, Subgroup};
