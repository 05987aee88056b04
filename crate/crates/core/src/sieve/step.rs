//! Recorded elimination steps.  Each step carries the modular evidence it
//! used and the full constraint state after applying it, so a verifier can
//! recompute everything from scratch and compare.

use super::state::ConstraintState;
use crate::modular::{EventualCycle, ResidueCycle};
use serde::{Deserialize, Serialize};

/// Evidence for the left-hand side residues of one modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum ProductEvidence {
    /// A fixed window size: the products form a purely periodic cycle.
    #[serde(rename = "cycle")]
    Cycle { cycle: ResidueCycle },
    /// All window sizes `k ≥ min_k` at once: for each start class
    /// `n mod start_period`, the set of residues attained by products over
    /// any such window.
    #[serde(rename = "sets")]
    Sets {
        modulus: u64,
        start_period: u64,
        sets: Vec<Vec<u64>>,
    },
}

/// One elimination step of a sieve branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Step {
    /// Intersect the lattice with the congruence
    /// `product(n) ≡ a · repunit(m) (mod modulus)`.
    #[serde(rename = "residue_intersection")]
    ResidueIntersection {
        modulus: u64,
        product: ProductEvidence,
        repunit: EventualCycle,
        /// Right-hand-side residues that occur for some feasible `m` class
        /// but are never attained by the left-hand side — the values the
        /// step ruled out.
        eliminated_rhs_residues: Vec<u64>,
        state_after: ConstraintState,
    },
    /// Transfer a forced index divisibility into a length constraint:
    /// when every feasible `n` is divisible by `divisor_d`, a prime
    /// `prime_p` dividing the term at `divisor_d` must divide the repdigit,
    /// which pins `m` to the zero positions of the repunit cycle mod
    /// `prime_p`.
    #[serde(rename = "divisibility_cascade")]
    DivisibilityCascade {
        divisor_d: u64,
        prime_p: u64,
        repunit: EventualCycle,
        state_after: ConstraintState,
    },
    /// Close out all window sizes `k ≥ base_window` at once: products over
    /// `base_window + 1` consecutive terms are identically zero mod
    /// `modulus`, while the repdigit side never is, and longer windows
    /// inherit the zero by divisibility of the product.
    #[serde(rename = "window_extension")]
    WindowExtension {
        base_window: u64,
        modulus: u64,
        product_cycle: ResidueCycle,
        repunit: EventualCycle,
        state_after: ConstraintState,
    },
}

impl Step {
    /// The constraint state recorded after this step.
    pub fn state_after(&self) -> &ConstraintState {
        match self {
            Step::ResidueIntersection { state_after, .. } => state_after,
            Step::DivisibilityCascade { state_after, .. } => state_after,
            Step::WindowExtension { state_after, .. } => state_after,
        }
    }

    /// The modulus the step's evidence lives in (for display purposes).
    pub fn modulus_label(&self) -> u64 {
        match self {
            Step::ResidueIntersection { modulus, .. } => *modulus,
            Step::DivisibilityCascade { prime_p, .. } => *prime_p,
            Step::WindowExtension { modulus, .. } => *modulus,
        }
    }

    /// Short human-readable tag for one-line renderings.
    pub fn kind_label(&self) -> &'static str {
        match self {
            Step::ResidueIntersection { .. } => "residue_intersection",
            Step::DivisibilityCascade { .. } => "divisibility_cascade",
            Step::WindowExtension { .. } => "window_extension",
        }
    }
}
