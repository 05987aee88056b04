//! Residue-cycle toolkit and congruence-sieve prover for repdigit
//! questions about second-order linear recurrence sequences.
//!
//! The crate has three layers:
//!
//! 1. **Exact arithmetic** ([`recurrence`], [`repdigit`]): recurrence terms,
//!    consecutive-term products and repdigit values as big integers.
//! 2. **Modular structure** ([`modular`]): purely periodic residue cycles of
//!    sequences and windowed products, eventual cycles of repunit residues,
//!    multiplicative orders and ranks of apparition.
//! 3. **The sieve** ([`sieve`], [`scan`]): a prover that intersects residue
//!    constraints on the joint lattice of (sequence index, repdigit length)
//!    until the feasible set empties, emitting a replayable [`sieve::Certificate`]
//!    that an independent verifier re-checks step by step; an exhaustive
//!    small-case scanner supplies the exception lists and acts as an
//!    independent oracle.
//!
//! [`tables`] renders the standard residue-cycle tables for the balancing
//! and Lucas-balancing sequences, which double as regression fixtures.

pub mod error;
pub mod modular;
pub mod recurrence;
pub mod repdigit;
pub mod scan;
pub mod sieve;
pub mod tables;
pub mod threads;

pub use error::{Error, Result};
