//! The constraint lattice: residue classes of `(n, m)` that have not yet
//! been excluded.

use super::target::TargetForm;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Sieve state after zero or more elimination steps.
///
/// The state asserts: every solution with `m > m_tail_checked` satisfies
/// `(n mod L, m mod M) ∈ feasible`.  Small lengths `m ≤ m_tail_checked`
/// fall outside the lattice and are covered by the exhaustive scan instead.
/// An empty `feasible` set with all guards satisfied therefore certifies
/// that no solution beyond the scanned range exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintState {
    /// Modulus of the index coordinate `n`.
    #[serde(rename = "L")]
    pub l: u64,
    /// Modulus of the length coordinate `m`.
    #[serde(rename = "M")]
    pub m: u64,
    /// Surviving residue pairs `(n mod L, m mod M)`, kept sorted.
    pub feasible: BTreeSet<(u64, u64)>,
    /// Lengths `m ≤ m_tail_checked` are excluded from the lattice's claim
    /// and must be covered by direct search.
    pub m_tail_checked: u64,
}

impl ConstraintState {
    /// Fresh state for a target: the trivial lattice `L = M = 1` with the
    /// single class `(0, 0)` feasible, claiming nothing yet beyond
    /// `m ≥ min_m` (lengths below `min_m` are outside the target itself).
    pub fn initial(target: &TargetForm) -> ConstraintState {
        let mut feasible = BTreeSet::new();
        feasible.insert((0, 0));
        ConstraintState {
            l: 1,
            m: 1,
            feasible,
            m_tail_checked: target.min_m - 1,
        }
    }

    /// True once no residue class survives.
    pub fn is_empty(&self) -> bool {
        self.feasible.is_empty()
    }

    /// Structural sanity: moduli positive, members reduced.
    pub fn well_formed(&self) -> bool {
        self.l >= 1
            && self.m >= 1
            && self.feasible.iter().all(|&(x, y)| x < self.l && y < self.m)
    }

    /// True when `self` refines `older`: the moduli extend those of `older`
    /// and every surviving class projects onto a class that survived there.
    /// Every elimination step must maintain this.
    pub fn refines(&self, older: &ConstraintState) -> bool {
        self.l % older.l == 0
            && self.m % older.m == 0
            && self.m_tail_checked >= older.m_tail_checked
            && self
                .feasible
                .iter()
                .all(|&(x, y)| older.feasible.contains(&(x % older.l, y % older.m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_shape() {
        let t = TargetForm::family(1).unwrap();
        let s = ConstraintState::initial(&t);
        assert_eq!(s.l, 1);
        assert_eq!(s.m, 1);
        assert_eq!(s.feasible.iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(s.m_tail_checked, 1);
        assert!(s.well_formed());
        assert!(!s.is_empty());
        assert!(s.refines(&s));
    }

    #[test]
    fn refinement_checks_projection() {
        let t = TargetForm::family(3).unwrap();
        let base = ConstraintState::initial(&t);
        let mut fine = ConstraintState {
            l: 6,
            m: 4,
            feasible: [(0, 1), (3, 3)].into_iter().collect(),
            m_tail_checked: 2,
        };
        assert!(fine.well_formed());
        assert!(fine.refines(&base));
        // A coarser state never refines a finer one with fewer classes.
        fine.feasible.insert((5, 0));
        let coarse = ConstraintState {
            l: 3,
            m: 2,
            feasible: [(0, 1)].into_iter().collect(),
            m_tail_checked: 2,
        };
        assert!(!fine.refines(&coarse));
    }

    #[test]
    fn serde_round_trip_sorted() {
        let s = ConstraintState {
            l: 12,
            m: 2,
            feasible: [(7, 1), (1, 1), (1, 0)].into_iter().collect(),
            m_tail_checked: 1,
        };
        let j = serde_json::to_string(&s).unwrap();
        // BTreeSet serializes in sorted order, keeping certificates diff-stable.
        assert_eq!(
            j,
            "{\"L\":12,\"M\":2,\"feasible\":[[1,0],[1,1],[7,1]],\"m_tail_checked\":1}"
        );
        assert_eq!(serde_json::from_str::<ConstraintState>(&j).unwrap(), s);
    }
}
