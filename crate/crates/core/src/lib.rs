//! Mesh patterns of length 2: occurrence counting, distribution tables,
//! equidistribution and Wilf classification, the closed forms, generating
//! functions and bijections that explain the classes.
//!
//! The brute-force side ([`distribution`], [`scan`]) is the oracle that every
//! formula, series and bijection in this crate is checked against.

pub mod bijections;
pub mod cache;
pub mod catalog;
pub mod distribution;
pub mod error;
pub mod formulas;
pub mod occurrence;
pub mod pattern;
pub mod perm;
pub mod rl;
pub mod scan;
pub mod series;
pub mod verify;

pub use distribution::{AvoidanceSequence, DistributionTable, JointTable, Scanner, Signature};
pub use error::{Error, ParseError};
pub use occurrence::{box_occupancy, count_occurrences, is_occurrence, list_occurrences};
pub use pattern::{format_pattern, parse_pattern, MeshBox, MeshPattern};
pub use perm::Permutation;
pub use rl::{rl_decomposition, RlDecomposition};

pub type Result<T, E = Error> = std::result::Result<T, E>;
