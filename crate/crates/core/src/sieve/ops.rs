//! The three elimination operations.  Each takes the current constraint
//! state plus a target with a concrete digit, checks its own preconditions,
//! and returns the recorded [`Step`] (including the refined state).  The
//! verifier calls the same functions, so prover and checker cannot drift
//! apart.

use super::state::ConstraintState;
use super::step::{ProductEvidence, Step};
use super::target::{DigitSpec, TargetForm, WindowSpec};
use crate::error::{Error, Result};
use crate::modular::{self, mul_mod, EventualCycle};
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeSet;

fn concrete_digit(target: &TargetForm) -> Result<u64> {
    match target.digit {
        DigitSpec::Fixed(a) => Ok(a),
        DigitSpec::All => Err(Error::InvalidTarget(
            "elimination steps need a concrete digit; split the target per digit first".into(),
        )),
    }
}

/// Lift the lattice moduli to accommodate periods `pi` (index side) and
/// `c` (length side), enforcing the size cap.
fn lift_moduli(
    state: &ConstraintState,
    pi: u64,
    c: u64,
    lattice_cap: u64,
    modulus: u64,
) -> Result<(u64, u64)> {
    let lp = (state.l as u128).lcm(&(pi as u128));
    let mp = (state.m as u128).lcm(&(c as u128));
    let size = lp.saturating_mul(mp);
    if size > lattice_cap as u128 {
        return Err(Error::LatticeCapExceeded { size, cap: lattice_cap, modulus });
    }
    Ok((lp as u64, mp as u64))
}

/// Right-hand-side residue `a · repunit(m) mod q` for a length class `mu`
/// taken modulo a multiple of the repunit cycle length.
fn rhs_residue(digit: u64, repunit: &EventualCycle, mu: u64) -> u64 {
    mul_mod(
        digit % repunit.modulus,
        repunit.cycle_value_for_class(mu),
        repunit.modulus,
    )
}

fn trial_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Intersect the state with the congruence
/// `window product(n) ≡ digit · repunit(m) (mod modulus)`.
///
/// For a fixed window the left side is a pure cycle in `n`; for an
/// `all_from` window it is, per start class of `n`, the set of residues any
/// admissible window attains — a class survives if *some* window residue
/// matches, which is the conservative direction for emptiness claims.
/// Lengths `m` within the repunit tail are moved out of the lattice's scope
/// by raising `m_tail_checked` (they are covered by the exhaustive scan).
pub fn apply_residue_intersection(
    state: &ConstraintState,
    target: &TargetForm,
    modulus: u64,
    lattice_cap: u64,
) -> Result<Step> {
    let digit = concrete_digit(target)?;
    target.validate()?;

    enum Lhs {
        Cycle(crate::modular::ResidueCycle),
        Sets { pi: u64, sets: Vec<BTreeSet<u64>> },
    }
    let lhs = match target.window {
        WindowSpec::Fixed { k } => Lhs::Cycle(modular::product_residue_cycle(&target.spec, k, modulus)?),
        WindowSpec::AllFrom { min_k } => {
            let seq = modular::residue_cycle(&target.spec, modulus)?;
            let sets = modular::product_residue_sets(&target.spec, min_k, modulus)?;
            debug_assert_eq!(sets.len(), seq.period);
            Lhs::Sets { pi: seq.period as u64, sets }
        }
    };
    let pi = match &lhs {
        Lhs::Cycle(c) => c.period as u64,
        Lhs::Sets { pi, .. } => *pi,
    };
    let repunit = modular::repunit_cycle(target.base_g, modulus)?;
    let c = repunit.period as u64;
    let (lp, mp) = lift_moduli(state, pi, c, lattice_cap, modulus)?;

    let matches = |nu: u64, rhs: u64| -> bool {
        match &lhs {
            Lhs::Cycle(cyc) => cyc.value_at(nu) == rhs,
            Lhs::Sets { pi, sets } => sets[(nu % pi) as usize].contains(&rhs),
        }
    };

    let lift_l = lp / state.l;
    let lift_m = mp / state.m;
    let mut feasible: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut rhs_vals: BTreeSet<u64> = BTreeSet::new();
    let mut lhs_vals: BTreeSet<u64> = BTreeSet::new();
    for &(x, y) in &state.feasible {
        for i in 0..lift_l {
            let nu = x + i * state.l;
            match &lhs {
                Lhs::Cycle(cyc) => {
                    lhs_vals.insert(cyc.value_at(nu));
                }
                Lhs::Sets { pi, sets } => {
                    lhs_vals.extend(sets[(nu % pi) as usize].iter().copied());
                }
            }
            for j in 0..lift_m {
                let mu = y + j * state.m;
                let rhs = rhs_residue(digit, &repunit, mu);
                rhs_vals.insert(rhs);
                if matches(nu, rhs) {
                    feasible.insert((nu, mu));
                }
            }
        }
    }
    let eliminated_rhs_residues: Vec<u64> = rhs_vals.difference(&lhs_vals).copied().collect();

    let state_after = ConstraintState {
        l: lp,
        m: mp,
        feasible,
        m_tail_checked: state.m_tail_checked.max(repunit.tail.len() as u64),
    };
    debug_assert!(state_after.well_formed() && state_after.refines(state));

    let product = match lhs {
        Lhs::Cycle(cycle) => ProductEvidence::Cycle { cycle },
        Lhs::Sets { pi, sets } => ProductEvidence::Sets {
            modulus,
            start_period: pi,
            sets: sets
                .into_iter()
                .map(|s| s.into_iter().collect::<Vec<u64>>())
                .collect(),
        },
    };
    Ok(Step::ResidueIntersection {
        modulus,
        product,
        repunit,
        eliminated_rhs_residues,
        state_after,
    })
}

/// Transfer a forced index divisibility to the length coordinate.
///
/// Preconditions, all checked: the sequence supports the index-to-term
/// divisibility transfer (strong divisibility); `divisor_d` divides the
/// index modulus `L` and every feasible index class is `≡ 0 (mod d)`;
/// `prime_p` is prime, divides the term at index `d`, and is coprime to the
/// digit.  Then `p` divides the term at every feasible index, hence the
/// whole window product, hence `digit · repunit(m)`, hence the repunit —
/// which pins `m` to the zero positions of the repunit cycle mod `p`.
pub fn apply_divisibility_cascade(
    state: &ConstraintState,
    target: &TargetForm,
    divisor_d: u64,
    prime_p: u64,
    lattice_cap: u64,
) -> Result<Step> {
    let digit = concrete_digit(target)?;
    target.validate()?;
    if !target.spec.is_balancing() {
        return Err(Error::StrongDivisibilityUnsupported(target.spec.name.clone()));
    }
    if divisor_d == 0 {
        return Err(Error::StepInapplicable("divisor d must be positive".into()));
    }
    if !trial_prime(prime_p) {
        return Err(Error::StepInapplicable(format!("{prime_p} is not prime")));
    }
    if digit % prime_p == 0 {
        return Err(Error::StepInapplicable(format!(
            "prime {prime_p} divides the digit {digit}; nothing transfers to the repunit"
        )));
    }
    if state.l % divisor_d != 0 {
        return Err(Error::StepInapplicable(format!(
            "divisor {divisor_d} does not divide the index modulus {}",
            state.l
        )));
    }
    if let Some(&(x, _)) = state.feasible.iter().find(|&&(x, _)| x % divisor_d != 0) {
        return Err(Error::StepInapplicable(format!(
            "feasible index class {x} is not divisible by {divisor_d}"
        )));
    }
    let term_d = target.spec.term(divisor_d).value;
    if !(term_d % num_bigint::BigInt::from(prime_p)).is_zero() {
        return Err(Error::StepInapplicable(format!(
            "prime {prime_p} does not divide the term at index {divisor_d}"
        )));
    }

    let repunit = modular::repunit_cycle(target.base_g, prime_p)?;
    let c = repunit.period as u64;
    let zero_classes: Vec<usize> = repunit
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 0)
        .map(|(j, _)| j)
        .collect();
    let m_tail_checked = state.m_tail_checked.max(repunit.tail.len() as u64);

    let state_after = if zero_classes.is_empty() {
        ConstraintState { l: state.l, m: state.m, feasible: BTreeSet::new(), m_tail_checked }
    } else {
        let (lp, mp) = lift_moduli(state, state.l, c, lattice_cap, prime_p)?;
        debug_assert_eq!(lp, state.l);
        let lift_m = mp / state.m;
        let mut feasible = BTreeSet::new();
        for &(x, y) in &state.feasible {
            for j in 0..lift_m {
                let mu = y + j * state.m;
                if repunit.cycle_value_for_class(mu) == 0 {
                    feasible.insert((x, mu));
                }
            }
        }
        ConstraintState { l: state.l, m: mp, feasible, m_tail_checked }
    };
    debug_assert!(state_after.well_formed() && state_after.refines(state));

    Ok(Step::DivisibilityCascade { divisor_d, prime_p, repunit, state_after })
}

/// Close out every window size `k ≥ base_window` at once.
///
/// Preconditions, all checked: the target window is `all_from` with
/// `min_k ≥ base_window`; products of `base_window + 1` consecutive terms
/// are identically zero mod `modulus`; and `digit · repunit(m)` is nonzero
/// mod `modulus` for every cycle length class.  Any admissible window
/// contains a run of `base_window + 1` consecutive terms, so its product is
/// divisible by one that is `≡ 0`, while the right side never is — no class
/// survives.  Tail lengths are moved out of scope via `m_tail_checked`.
pub fn apply_window_extension(
    state: &ConstraintState,
    target: &TargetForm,
    base_window: u64,
    modulus: u64,
) -> Result<Step> {
    let digit = concrete_digit(target)?;
    target.validate()?;
    match target.window {
        WindowSpec::AllFrom { min_k } if min_k >= base_window => {}
        WindowSpec::AllFrom { min_k } => {
            return Err(Error::StepInapplicable(format!(
                "window extension at base {base_window} does not cover windows from {min_k}"
            )));
        }
        WindowSpec::Fixed { .. } => {
            return Err(Error::StepInapplicable(
                "window extension applies only to all_from windows".into(),
            ));
        }
    }
    let product_cycle = modular::product_residue_cycle(&target.spec, base_window, modulus)?;
    if !product_cycle.is_identically_zero() {
        return Err(Error::StepInapplicable(format!(
            "products of {} consecutive terms are not identically zero mod {modulus}",
            base_window + 1
        )));
    }
    let repunit = modular::repunit_cycle(target.base_g, modulus)?;
    if let Some(&v) = repunit
        .values
        .iter()
        .find(|&&v| mul_mod(digit % modulus, v, modulus) == 0)
    {
        return Err(Error::StepInapplicable(format!(
            "digit {digit} times repunit residue {v} vanishes mod {modulus}"
        )));
    }

    let state_after = ConstraintState {
        l: state.l,
        m: state.m,
        feasible: BTreeSet::new(),
        m_tail_checked: state.m_tail_checked.max(repunit.tail.len() as u64),
    };
    debug_assert!(state_after.well_formed() && state_after.refines(state));
    Ok(Step::WindowExtension { base_window, modulus, product_cycle, repunit, state_after })
}
