//! Zero-sum subsequences over finite abelian groups.
//!
//! Detection, exact and modular counting, and constructive extraction of
//! zero-sum subsequences of prescribed length; extremal sequences certifying
//! lower bounds for modified Erdős–Ginzburg–Ziv constants; and an exhaustive
//! search that determines those constants on small groups.

pub mod cli;
pub mod constants;
mod dp;
pub mod engine;
pub mod error;
pub mod extremal;
pub mod group;
pub mod proofs;
pub mod sequence;

pub use engine::{
    count_zero_sum_subseqs, count_zero_sum_with, find_zero_sum_subseq, has_zero_sum_in_lengths,
    has_zero_sum_of_length, CountValue, TargetLengths, ZeroSumCount,
};
pub use error::{Error, Result};
pub use group::{min_nondivisor, Group, GroupElement};
pub use sequence::{Sequence, Witness};

/// Coefficient type for exact subsequence counts.
pub type ExactCount = num_bigint::BigUint;
/// Coefficient type for counts reduced modulo a runtime modulus below 2^64.
pub type ResidueCount = u128;
