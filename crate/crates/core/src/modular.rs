//! Residue cycles of recurrence sequences, windowed products, repunit
//! residues, multiplicative orders and ranks of apparition.
//!
//! For a modulus `q` with `gcd(coeff_q, q) = 1` the state map
//! `(x_{n-1}, x_n) → (x_n, x_{n+1})` is a bijection on pairs mod `q`, so the
//! residue sequence of the recurrence is purely periodic. Repunit residues
//! `r_m = (g^m − 1)/(g − 1) mod q` follow the affine iteration
//! `r_{m+1} = g·r_m + 1` and are only eventually periodic when
//! `gcd(g, q) > 1`; they are therefore represented as a tail plus a cycle.

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::collections::HashMap;

/// One minimal period of a purely periodic residue sequence, indexed from
/// `n = 0`. Invariant: `period == values.len()` and no proper divisor of
/// `period` is also a period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCycle {
    pub modulus: u64,
    pub period: usize,
    pub values: Vec<u64>,
}

impl ResidueCycle {
    fn new(modulus: u64, values: Vec<u64>) -> Self {
        ResidueCycle { modulus, period: values.len(), values }
    }

    /// Residue at sequence index `n`.
    pub fn value_at(&self, n: u64) -> u64 {
        self.values[(n % self.period as u64) as usize]
    }

    /// Whether every listed residue is zero.
    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Internal consistency: length matches, all residues canonical.
    pub fn well_formed(&self) -> bool {
        self.period == self.values.len()
            && self.period > 0
            && self.values.iter().all(|&v| v < self.modulus)
    }
}

/// Tail-plus-cycle structure of repunit residues. `tail[i]` is the residue
/// for length `m = i + 1`; for `m > tail.len()` the residue is
/// `cycle[(m - tail.len() - 1) mod cycle.len()]`. Both parts are minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualCycle {
    pub modulus: u64,
    pub tail: Vec<u64>,
    pub period: usize,
    pub values: Vec<u64>,
}

impl EventualCycle {
    /// Residue for repunit length `m ≥ 1`.
    pub fn value_at(&self, m: u64) -> u64 {
        let t = self.tail.len() as u64;
        if m <= t {
            self.tail[(m - 1) as usize]
        } else {
            self.values[((m - t - 1) % self.period as u64) as usize]
        }
    }

    /// Residue for a length class `mu` taken mod a multiple of the cycle
    /// length, valid for all lengths `m ≡ mu` beyond the tail.
    pub fn cycle_value_for_class(&self, mu: u64) -> u64 {
        let t = self.tail.len() as i128;
        let c = self.period as i128;
        let idx = (mu as i128 - t - 1).rem_euclid(c) as usize;
        self.values[idx]
    }

    pub fn well_formed(&self) -> bool {
        self.period == self.values.len()
            && self.period > 0
            && self.values.iter().chain(self.tail.iter()).all(|&v| v < self.modulus)
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    Ok(())
}

fn check_invertible(spec: &RecurrenceSpec, modulus: u64) -> Result<()> {
    let q_abs = spec.coeff_q.unsigned_abs();
    if q_abs.gcd(&modulus) != 1 {
        return Err(Error::NonInvertibleStateMap { coeff_q: spec.coeff_q, modulus });
    }
    Ok(())
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Minimal pure residue cycle of a recurrence sequence mod `modulus`.
///
/// Detection walks state pairs `(x_{n-1}, x_n)` until the initial pair
/// recurs; because the state map is a bijection the first repeated state is
/// the initial one (asserted, not assumed). Minimality over the value
/// sequence is then verified against every proper divisor of the period.
pub fn residue_cycle(spec: &RecurrenceSpec, modulus: u64) -> Result<ResidueCycle> {
    check_modulus(modulus)?;
    check_invertible(spec, modulus)?;
    let p = spec.coeff_p.rem_euclid(modulus as i64) as u64;
    let q = spec.coeff_q.rem_euclid(modulus as i64) as u64;
    let s0 = spec.seed0.rem_euclid(modulus as i64) as u64;
    let s1 = spec.seed1.rem_euclid(modulus as i64) as u64;

    let mut values = vec![s0];
    let (mut a, mut b) = (s0, s1);
    let cap = modulus
        .checked_mul(modulus)
        .and_then(|x| x.checked_add(2))
        .unwrap_or(u64::MAX);
    for step in 0..cap {
        let next = (mul_mod(p, b, modulus) + mul_mod(q, a, modulus)) % modulus;
        a = b;
        b = next;
        if (a, b) == (s0, s1) {
            // Purity: the walk returned exactly to the initial state.
            let period = step + 1;
            debug_assert_eq!(values.len() as u64, period);
            // Value-sequence minimality: no proper divisor of the state
            // period is a period of the values.
            for d in 1..=(period / 2) {
                if period % d != 0 {
                    continue;
                }
                let d = d as usize;
                if values.iter().enumerate().all(|(i, &v)| v == values[i % d]) {
                    return Err(Error::Internal(format!(
                        "state period {period} mod {modulus} is not the minimal value period {d}"
                    )));
                }
            }
            return Ok(ResidueCycle::new(modulus, values));
        }
        values.push(a);
    }
    Err(Error::Internal(format!(
        "no state repetition within {cap} steps mod {modulus}"
    )))
}

/// Minimal cycle of products of `k + 1` consecutive terms,
/// `Π_{i=0..k} x_{n+i} mod modulus`, indexed by `n` from 0.
///
/// Computed as window products over one full period of the sequence cycle,
/// then reduced to the minimal period (which always divides the sequence
/// period).
pub fn product_residue_cycle(spec: &RecurrenceSpec, k: u64, modulus: u64) -> Result<ResidueCycle> {
    let seq = residue_cycle(spec, modulus)?;
    let pi = seq.period;
    let mut vals = Vec::with_capacity(pi);
    for n in 0..pi {
        let mut acc = 1u64 % modulus;
        for i in 0..=k {
            acc = mul_mod(acc, seq.values[(n + i as usize) % pi], modulus);
        }
        vals.push(acc);
    }
    Ok(ResidueCycle::new(modulus, minimize_cycle(vals)))
}

/// Reduce a periodic value list to its minimal period.
fn minimize_cycle(vals: Vec<u64>) -> Vec<u64> {
    let n = vals.len();
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        if vals.iter().enumerate().all(|(i, &v)| v == vals[i % d]) {
            return vals[..d].to_vec();
        }
    }
    vals
}

/// Tail and minimal cycle of repunit residues
/// `r_m = (g^m − 1)/(g − 1) mod modulus` for `m = 1, 2, …`, via the affine
/// iteration `r_1 = 1`, `r_{m+1} = g·r_m + 1`.
///
/// First-repeat detection yields both minimal tail and minimal cycle: any
/// shorter representation would have produced an earlier repeat.
pub fn repunit_cycle(base_g: u64, modulus: u64) -> Result<EventualCycle> {
    if base_g < 2 {
        return Err(Error::BaseTooSmall(base_g));
    }
    check_modulus(modulus)?;
    let g = base_g % modulus;
    let mut vals: Vec<u64> = Vec::new();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut r = 1 % modulus;
    loop {
        if let Some(&first) = seen.get(&r) {
            // r_{current} equals r_{first}; residues r_1..r_{first-1} form
            // the tail and r_{first}..r_{current-1} the cycle (1-based).
            let tail = vals[..first - 1].to_vec();
            let cycle = vals[first - 1..].to_vec();
            return Ok(EventualCycle {
                modulus,
                tail,
                period: cycle.len(),
                values: cycle,
            });
        }
        vals.push(r);
        seen.insert(r, vals.len());
        r = (mul_mod(g, r, modulus) + 1) % modulus;
    }
}

/// Least `e > 0` with `base_g^e ≡ 1 (mod modulus)`.
pub fn multiplicative_order(base_g: u64, modulus: u64) -> Result<u64> {
    check_modulus(modulus)?;
    let g = base_g % modulus;
    if g.gcd(&modulus) != 1 {
        return Err(Error::NotCoprime { base: base_g, modulus });
    }
    let mut acc = g;
    let mut e = 1u64;
    while acc != 1 {
        acc = mul_mod(acc, g, modulus);
        e += 1;
        if e > modulus {
            return Err(Error::Internal(format!(
                "order search exceeded modulus {modulus} for base {base_g}"
            )));
        }
    }
    Ok(e)
}

/// Least index `n ≥ 1` with `x_n ≡ 0 (mod modulus)` within one period, or
/// `None` when the cycle contains no zero past index 0.
pub fn rank_of_apparition(spec: &RecurrenceSpec, modulus: u64) -> Result<Option<u64>> {
    let cyc = residue_cycle(spec, modulus)?;
    for (n, &v) in cyc.values.iter().enumerate().skip(1) {
        if v == 0 {
            return Ok(Some(n as u64));
        }
    }
    // Index 0 is excluded; a zero there recurs at index `period`, which is
    // then the least positive zero index.
    if cyc.values[0] == 0 {
        return Ok(Some(cyc.period as u64));
    }
    Ok(None)
}

/// For every start class `n mod π` (with `π` the sequence period), the set
/// of residues attained by products of `ℓ` consecutive terms starting at
/// `n`, over all window lengths `ℓ ≥ min_window_k + 1`.
///
/// The vector `V_ℓ = (P_ℓ[0], …, P_ℓ[π-1])` of all start classes obeys
/// `P_{ℓ+1}[n] = x_n · P_ℓ[n+1 mod π]`, a deterministic map, so the vector
/// sequence is eventually periodic; sets are unions over its tail and one
/// full cycle.
pub fn product_residue_sets(
    spec: &RecurrenceSpec,
    min_window_k: u64,
    modulus: u64,
) -> Result<Vec<BTreeSet<u64>>> {
    let seq = residue_cycle(spec, modulus)?;
    let pi = seq.period;
    // Products of min_window_k + 1 terms per start class.
    let mut v: Vec<u64> = (0..pi)
        .map(|n| {
            let mut acc = 1u64 % modulus;
            for i in 0..=(min_window_k as usize) {
                acc = mul_mod(acc, seq.values[(n + i) % pi], modulus);
            }
            acc
        })
        .collect();
    let mut sets: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); pi];
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    const CAP: usize = 1_000_000;
    for _ in 0..CAP {
        if seen.contains_key(&v) {
            return Ok(sets);
        }
        for (n, &val) in v.iter().enumerate() {
            sets[n].insert(val);
        }
        seen.insert(v.clone(), ());
        // Extend every window by one factor on the right:
        // P_{ℓ+1}[n] = x_n · P_ℓ[(n+1) mod π].
        let next: Vec<u64> = (0..pi)
            .map(|n| mul_mod(seq.values[n], v[(n + 1) % pi], modulus))
            .collect();
        v = next;
    }
    Err(Error::Internal(format!(
        "product set iteration exceeded {CAP} window lengths mod {modulus}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bal() -> RecurrenceSpec {
        RecurrenceSpec::balancing()
    }
    fn luc() -> RecurrenceSpec {
        RecurrenceSpec::lucas_balancing()
    }

    #[test]
    fn balancing_cycle_examples() {
        let c3 = residue_cycle(&bal(), 3).unwrap();
        assert_eq!(c3.values, vec![0, 1, 0, 2]);
        assert_eq!(c3.period, 4);
        let c11 = residue_cycle(&bal(), 11).unwrap();
        assert_eq!(c11.period, 12);
        assert_eq!(c11.values, vec![0, 1, 6, 2, 6, 1, 0, 10, 5, 9, 5, 10]);
        let c2 = residue_cycle(&bal(), 2).unwrap();
        assert_eq!(c2.values, vec![0, 1]);
        let l8 = residue_cycle(&luc(), 8).unwrap();
        assert_eq!(l8.values, vec![1, 3]);
        assert!(residue_cycle(&bal(), 1).is_err());
    }

    #[test]
    fn rejects_non_invertible_state_map() {
        let spec = RecurrenceSpec {
            name: "even_q".into(),
            coeff_p: 1,
            coeff_q: 2,
            seed0: 0,
            seed1: 1,
        };
        assert!(residue_cycle(&spec, 4).is_err());
        assert!(residue_cycle(&spec, 3).is_ok());
    }

    #[test]
    fn product_cycle_examples() {
        let p5 = product_residue_cycle(&bal(), 1, 5).unwrap();
        assert_eq!(p5.values, vec![0, 1, 0]);
        let p100 = product_residue_cycle(&bal(), 1, 100).unwrap();
        assert_eq!(p100.period, 60);
        assert_eq!(&p100.values[..6], &[0, 6, 10, 40, 56, 70]);
        let p10 = product_residue_cycle(&bal(), 2, 10).unwrap();
        assert!(p10.is_identically_zero());
        assert_eq!(p10.values, vec![0]);
        // Window of zero extra factors reduces to the plain cycle.
        for q in [3u64, 7, 11] {
            assert_eq!(
                product_residue_cycle(&bal(), 0, q).unwrap(),
                residue_cycle(&bal(), q).unwrap()
            );
        }
    }

    #[test]
    fn repunit_examples() {
        let r11 = repunit_cycle(10, 11).unwrap();
        assert!(r11.tail.is_empty());
        assert_eq!(r11.values, vec![1, 0]);
        let r8 = repunit_cycle(10, 8).unwrap();
        assert_eq!(r8.tail, vec![1, 3]);
        assert_eq!(r8.values, vec![7]);
        let r5 = repunit_cycle(10, 5).unwrap();
        assert!(r5.tail.is_empty());
        assert_eq!(r5.values, vec![1]);
        // Replays: value_at agrees with direct evaluation.
        assert_eq!(r8.value_at(1), 1);
        assert_eq!(r8.value_at(2), 3);
        for m in 3..10 {
            assert_eq!(r8.value_at(m), 7);
        }
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(10, 17).unwrap(), 16);
        assert_eq!(multiplicative_order(10, 7).unwrap(), 6);
        assert_eq!(multiplicative_order(10, 3).unwrap(), 1);
        assert!(multiplicative_order(10, 5).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_of_apparition(&bal(), 5).unwrap(), Some(3));
        assert_eq!(rank_of_apparition(&bal(), 17).unwrap(), Some(4));
        assert_eq!(rank_of_apparition(&luc(), 5).unwrap(), None);
    }

    #[test]
    fn product_sets_examples() {
        let s8 = product_residue_sets(&luc(), 1, 8).unwrap();
        for set in &s8 {
            assert_eq!(set.iter().copied().collect::<Vec<_>>(), vec![1, 3]);
        }
        let s5 = product_residue_sets(&luc(), 1, 5).unwrap();
        let union: BTreeSet<u64> = s5.iter().flatten().copied().collect();
        assert_eq!(union.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let s7 = product_residue_sets(&luc(), 1, 7).unwrap();
        let union: BTreeSet<u64> = s7.iter().flatten().copied().collect();
        assert_eq!(union.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
    }
}
