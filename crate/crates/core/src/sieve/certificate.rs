//! Certificates: the complete, self-contained record of a sieve run that a
//! verifier can replay without trusting the prover.

use super::state::ConstraintState;
use super::step::Step;
use super::target::{TargetForm, WindowSpec};
use serde::{Deserialize, Serialize};

/// Schema version emitted by this library.
pub const SCHEMA_VERSION: u32 = 1;

/// Modulus-selection strategy used by the prover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Replay the pool in the order given by the caller.
    PoolOrder,
    /// Repeatedly pick the pool modulus whose step leaves the lowest
    /// density of surviving classes, stopping when no step strictly helps.
    GreedySmallestSurvivor,
}

/// One proof branch: a window selector together with the elimination steps
/// taken for it and the state they end in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub window: WindowSpec,
    pub steps: Vec<Step>,
    pub final_state: ConstraintState,
}

/// All branches for one digit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subproof {
    pub digit: u64,
    pub branches: Vec<Branch>,
}

/// A solution found by the exhaustive small-case scan, exempted from the
/// lattice claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exception {
    pub n: u64,
    pub m: u64,
    pub a: u64,
}

/// Bounds of the exhaustive scan backing the certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCaseBound {
    pub max_n: u64,
    pub max_m: u64,
}

/// Surviving residue classes for one digit/window when the sieve did not
/// finish the job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub digit: u64,
    pub window: WindowSpec,
    pub state: ConstraintState,
}

/// Overall outcome of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Conclusion {
    /// No solutions beyond the listed exceptions.
    #[serde(rename = "empty")]
    Empty,
    /// Some residue classes survived; the target is not settled.
    #[serde(rename = "residual")]
    Residual { residual: Vec<ResidualEntry> },
}

/// A complete sieve certificate.
///
/// Serialization is deterministic: field order is fixed, sets are sorted,
/// and no map with nondeterministic iteration order appears anywhere, so
/// the same inputs always produce byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub target: TargetForm,
    pub pool: Vec<u64>,
    pub strategy: Strategy,
    pub lattice_cap: u64,
    pub small_case_bound: SmallCaseBound,
    pub subproofs: Vec<Subproof>,
    pub exceptions: Vec<Exception>,
    pub conclusion: Conclusion,
}

impl Certificate {
    /// True when the certificate claims full emptiness beyond exceptions.
    pub fn claims_empty(&self) -> bool {
        matches!(self.conclusion, Conclusion::Empty)
    }

    /// Canonical JSON rendering (pretty, two-space indent, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serialization");
        s.push('\n');
        s
    }

    /// Parse a certificate from JSON text.
    pub fn from_json(text: &str) -> crate::error::Result<Certificate> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::Error::InvalidTarget(format!("certificate parse: {e}")))
    }
}
