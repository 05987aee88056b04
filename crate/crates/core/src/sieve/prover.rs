//! The automated prover: plans branches, runs the sieve per digit, gathers
//! the exhaustively-scanned exceptions, checks every soundness guard, and
//! assembles the final [`Certificate`].

use super::certificate::{
    Branch, Certificate, Conclusion, Exception, ResidualEntry, SmallCaseBound, Strategy, Subproof,
    SCHEMA_VERSION,
};
use super::ops::{apply_residue_intersection, apply_window_extension};
use super::state::ConstraintState;
use super::step::Step;
use super::target::{DigitSpec, TargetForm, WindowSpec};
use crate::error::{Error, Result};
use crate::modular::{self, mul_mod};
use crate::scan::{self, ScanHit};
use crate::threads;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default ceiling on `L · M`, the size of the residue-class lattice.
pub const DEFAULT_LATTICE_CAP: u64 = 10_000_000;

/// How far beyond the target's minimum window the prover searches for a
/// window size whose products vanish identically mod some pool modulus.
const EXTENSION_SEARCH_SPAN: u64 = 8;

impl SmallCaseBound {
    /// Default exhaustive-search bounds: indices up to 300, repdigits up to
    /// 150 digits.  The balancing-type terms near index 300 have well over
    /// 150 digits, so the growth guard holds with a wide margin.
    pub const DEFAULT: SmallCaseBound = SmallCaseBound { max_n: 300, max_m: 150 };
}

/// Largest repdigit with at most `max_m` digits in base `g`: `g^max_m − 1`.
fn repdigit_ceiling(base_g: u64, max_m: u64) -> Result<BigInt> {
    let exp = u32::try_from(max_m).map_err(|_| Error::NonPositiveBound { name: "max_m" })?;
    Ok(BigInt::from(base_g).pow(exp) - BigInt::one())
}

/// Soundness guards shared by prover and verifier.  Returns the window
/// sizes the exhaustive scan must cover.
///
/// 1. Growth certification: terms strictly increasing and positive from
///    index 1 (otherwise no finite scan bounds anything).
/// 2. Scan completeness: the smallest admissible window product starting
///    beyond `max_n` already exceeds every repdigit of `max_m` digits, so
///    solutions with `m ≤ max_m` cannot hide at unscanned indices.
pub(super) fn soundness_guards(target: &TargetForm, bound: &SmallCaseBound) -> Result<Vec<u64>> {
    if bound.max_n == 0 {
        return Err(Error::NonPositiveBound { name: "max_n" });
    }
    if bound.max_m == 0 {
        return Err(Error::NonPositiveBound { name: "max_m" });
    }
    if !target.spec.has_certified_growth() {
        let index = target.spec.first_non_increasing_index(1, 64).unwrap_or(0);
        return Err(Error::NonMonotoneTerms { spec: target.spec.name.clone(), index });
    }
    let ks = scan::window_sizes(target, bound.max_m)?;
    let ceiling = repdigit_ceiling(target.base_g, bound.max_m)?;
    let smallest_beyond = target
        .spec
        .consecutive_product(bound.max_n + 1, target.window.min_k())?;
    if smallest_beyond <= ceiling {
        return Err(Error::GrowthBoundTooWeak { index: bound.max_n + 1, max_m: bound.max_m });
    }
    Ok(ks)
}

/// How one branch will be discharged.
#[derive(Clone, Copy, Debug)]
enum PlanKind {
    /// Run elimination steps against the pool.
    Sieve,
    /// Single window-extension step with this modulus.
    Extension { modulus: u64 },
}

#[derive(Clone, Copy, Debug)]
struct BranchPlan {
    window: WindowSpec,
    kind: PlanKind,
}

/// Decide the branch layout for every digit.
///
/// Fixed-window targets get one sieve branch per digit.  For `all_from`
/// targets the planner looks for the smallest window size `w ≥ min_k` at
/// which some pool modulus makes all products vanish identically; if found,
/// each digit gets one fixed-window sieve branch per `k ∈ [min_k, w)` plus
/// a single extension branch covering all `k ≥ w` (choosing, among the
/// extension candidates at `w`, the one covering the most digits, ties to
/// pool order).  Digits no candidate covers — and targets where no such `w`
/// exists — fall back to one joint branch over all window sizes at once.
fn plan_branches(
    target: &TargetForm,
    pool: &[u64],
    digits: &[u64],
) -> BTreeMap<u64, Vec<BranchPlan>> {
    let mut plans = BTreeMap::new();
    let min_k = match target.window {
        WindowSpec::Fixed { .. } => {
            for &a in digits {
                plans.insert(a, vec![BranchPlan { window: target.window, kind: PlanKind::Sieve }]);
            }
            return plans;
        }
        WindowSpec::AllFrom { min_k } => min_k,
    };

    let mut pool_dedup: Vec<u64> = Vec::new();
    for &q in pool {
        if !pool_dedup.contains(&q) {
            pool_dedup.push(q);
        }
    }
    // (window size, candidates in pool order with the digits each covers)
    let mut found: Option<(u64, Vec<(u64, BTreeSet<u64>)>)> = None;
    'search: for w in min_k..=min_k + EXTENSION_SEARCH_SPAN {
        let mut cands: Vec<(u64, BTreeSet<u64>)> = Vec::new();
        for &q in &pool_dedup {
            let Ok(pc) = modular::product_residue_cycle(&target.spec, w, q) else { continue };
            if !pc.is_identically_zero() {
                continue;
            }
            let Ok(ru) = modular::repunit_cycle(target.base_g, q) else { continue };
            let covered: BTreeSet<u64> = digits
                .iter()
                .copied()
                .filter(|&a| ru.values.iter().all(|&v| mul_mod(a % q, v, q) != 0))
                .collect();
            if !covered.is_empty() {
                cands.push((q, covered));
            }
        }
        if !cands.is_empty() {
            found = Some((w, cands));
            break 'search;
        }
    }

    match found {
        None => {
            for &a in digits {
                plans.insert(a, vec![BranchPlan { window: target.window, kind: PlanKind::Sieve }]);
            }
        }
        Some((w, cands)) => {
            let primary = cands
                .iter()
                .max_by_key(|(_, covered)| covered.len())
                .map(|(q, covered)| (*q, covered.clone()))
                .expect("nonempty candidate list");
            for &a in digits {
                let modulus = if primary.1.contains(&a) {
                    Some(primary.0)
                } else {
                    cands.iter().find(|(_, cov)| cov.contains(&a)).map(|(q, _)| *q)
                };
                let plan = match modulus {
                    Some(q) => {
                        let mut v: Vec<BranchPlan> = (min_k..w)
                            .map(|k| BranchPlan {
                                window: WindowSpec::Fixed { k },
                                kind: PlanKind::Sieve,
                            })
                            .collect();
                        v.push(BranchPlan {
                            window: WindowSpec::AllFrom { min_k: w },
                            kind: PlanKind::Extension { modulus: q },
                        });
                        v
                    }
                    None => vec![BranchPlan { window: target.window, kind: PlanKind::Sieve }],
                };
                plans.insert(a, plan);
            }
        }
    }
    plans
}

/// Run the elimination loop for one concrete digit and window.
fn sieve_branch(
    branch_target: &TargetForm,
    pool: &[u64],
    strategy: Strategy,
    lattice_cap: u64,
) -> Result<(Vec<Step>, ConstraintState)> {
    let mut state = ConstraintState::initial(branch_target);
    let mut steps = Vec::new();
    match strategy {
        Strategy::PoolOrder => {
            for &q in pool {
                if state.is_empty() {
                    break;
                }
                let step = apply_residue_intersection(&state, branch_target, q, lattice_cap)?;
                state = step.state_after().clone();
                steps.push(step);
            }
        }
        Strategy::GreedySmallestSurvivor => {
            greedy_sieve(branch_target, pool, lattice_cap, &mut state, &mut steps)?;
        }
    }
    Ok((steps, state))
}

/// Cached per-modulus data for greedy scoring.
struct GreedyCand {
    modulus: u64,
    /// Index-side period (product-cycle period, or sequence period for
    /// set evidence).
    pi: u64,
    /// Repunit cycle length and tail length.
    c: u64,
    tail: u64,
    lhs: GreedyLhs,
    /// Right-hand-side residue per repunit cycle position:
    /// `digit · cycle[j] mod q`.
    rhs_vals: Vec<u64>,
}

enum GreedyLhs {
    Cycle(Vec<u64>),
    Sets(Vec<BTreeSet<u64>>),
}

fn build_candidate(branch_target: &TargetForm, q: u64, digit: u64) -> Option<GreedyCand> {
    let (pi, lhs) = match branch_target.window {
        WindowSpec::Fixed { k } => {
            let pc = modular::product_residue_cycle(&branch_target.spec, k, q).ok()?;
            (pc.period as u64, GreedyLhs::Cycle(pc.values))
        }
        WindowSpec::AllFrom { min_k } => {
            let seq = modular::residue_cycle(&branch_target.spec, q).ok()?;
            let sets = modular::product_residue_sets(&branch_target.spec, min_k, q).ok()?;
            (seq.period as u64, GreedyLhs::Sets(sets))
        }
    };
    let ru = modular::repunit_cycle(branch_target.base_g, q).ok()?;
    let rhs_vals: Vec<u64> = ru.values.iter().map(|&v| mul_mod(digit % q, v, q)).collect();
    Some(GreedyCand {
        modulus: q,
        pi,
        c: ru.period as u64,
        tail: ru.tail.len() as u64,
        lhs,
        rhs_vals,
    })
}

/// Exact survivor count and lattice size of the state that applying `cand`
/// would produce, without materializing the lifted lattice.
///
/// Lifting a feasible pair `(x, y)` makes the index coordinate sweep each
/// residue `u mod pi` with `u ≡ x (mod gcd(L, pi))` exactly once, and the
/// repunit cycle position sweep each `j mod c` with
/// `j ≡ y − tail − 1 (mod gcd(M, c))` exactly once; survivors are counted
/// by bucketing both sides by those residues and multiplying per-value
/// counts.
fn score_candidate(
    state: &ConstraintState,
    cand: &GreedyCand,
    lattice_cap: u64,
) -> Option<(u128, u128)> {
    let lp = (state.l as u128).lcm(&(cand.pi as u128));
    let mp = (state.m as u128).lcm(&(cand.c as u128));
    let lattice = lp.saturating_mul(mp);
    if lattice > lattice_cap as u128 {
        return None;
    }
    let g1 = state.l.gcd(&cand.pi);
    let g2 = state.m.gcd(&cand.c);

    let mut lhs_cnt: Vec<HashMap<u64, u64>> = vec![HashMap::new(); g1 as usize];
    match &cand.lhs {
        GreedyLhs::Cycle(vals) => {
            for (u, &v) in vals.iter().enumerate() {
                *lhs_cnt[u % g1 as usize].entry(v).or_insert(0) += 1;
            }
        }
        GreedyLhs::Sets(sets) => {
            for (u, set) in sets.iter().enumerate() {
                for &v in set {
                    *lhs_cnt[u % g1 as usize].entry(v).or_insert(0) += 1;
                }
            }
        }
    }
    let mut rhs_cnt: Vec<HashMap<u64, u64>> = vec![HashMap::new(); g2 as usize];
    for (j, &r) in cand.rhs_vals.iter().enumerate() {
        *rhs_cnt[j % g2 as usize].entry(r).or_insert(0) += 1;
    }

    let mut memo: HashMap<(u64, u64), u128> = HashMap::new();
    let mut survivors: u128 = 0;
    for &(x, y) in &state.feasible {
        let bx = x % g1;
        let by = (y as i128 - cand.tail as i128 - 1).rem_euclid(g2 as i128) as u64;
        let count = *memo.entry((bx, by)).or_insert_with(|| {
            lhs_cnt[bx as usize]
                .iter()
                .map(|(v, &c1)| c1 as u128 * *rhs_cnt[by as usize].get(v).unwrap_or(&0) as u128)
                .sum()
        });
        survivors += count;
    }
    Some((survivors, lattice))
}

/// Greedy elimination: each round scores every remaining pool modulus in
/// parallel, then sequentially picks the one leaving the strictly lowest
/// density of survivors (ties to the smaller modulus) and applies it.
/// Stops when the state empties or no candidate strictly improves the
/// density.  Candidates whose lifted lattice would exceed the cap, or whose
/// modular data is undefined for the recurrence, are skipped.
fn greedy_sieve(
    branch_target: &TargetForm,
    pool: &[u64],
    lattice_cap: u64,
    state: &mut ConstraintState,
    steps: &mut Vec<Step>,
) -> Result<()> {
    let digit = match branch_target.digit {
        DigitSpec::Fixed(a) => a,
        DigitSpec::All => {
            return Err(Error::InvalidTarget("greedy sieve needs a concrete digit".into()))
        }
    };
    let mut pool_dedup: Vec<u64> = Vec::new();
    for &q in pool {
        if !pool_dedup.contains(&q) {
            pool_dedup.push(q);
        }
    }
    let built: Vec<Option<GreedyCand>> = threads::pool().install(|| {
        pool_dedup
            .par_iter()
            .map(|&q| build_candidate(branch_target, q, digit))
            .collect()
    });
    let mut cands: Vec<GreedyCand> = built.into_iter().flatten().collect();

    loop {
        if state.is_empty() || cands.is_empty() {
            return Ok(());
        }
        let cur_survivors = state.feasible.len() as u128;
        let cur_lattice = state.l as u128 * state.m as u128;
        let scores: Vec<Option<(u128, u128)>> = threads::pool().install(|| {
            cands
                .par_iter()
                .map(|cand| score_candidate(state, cand, lattice_cap))
                .collect()
        });
        // Sequential argmin keeps the choice independent of thread count.
        let mut best: Option<(usize, u128, u128)> = None;
        for (i, sc) in scores.iter().enumerate() {
            let Some((sur, lat)) = *sc else { continue };
            // Densities sur/lat are compared exactly by cross-multiplying.
            if sur * cur_lattice >= cur_survivors * lat {
                continue; // not a strict improvement
            }
            best = match best {
                None => Some((i, sur, lat)),
                Some((bi, bsur, blat)) => {
                    let better = sur * blat < bsur * lat
                        || (sur * blat == bsur * lat && cands[i].modulus < cands[bi].modulus);
                    if better {
                        Some((i, sur, lat))
                    } else {
                        Some((bi, bsur, blat))
                    }
                }
            };
        }
        let Some((bi, _, _)) = best else { return Ok(()) };
        let q = cands[bi].modulus;
        let step = apply_residue_intersection(state, branch_target, q, lattice_cap)?;
        *state = step.state_after().clone();
        steps.push(step);
        cands.remove(bi);
    }
}

/// Exhaustive small-case hits, tagged with the window size that produced
/// each (needed to match hits against the branch covering that size).
pub(super) fn collect_small_hits(
    target: &TargetForm,
    bound: &SmallCaseBound,
    ks: &[u64],
) -> Result<Vec<(u64, ScanHit)>> {
    let mut out = Vec::new();
    for &k in ks {
        let t = target.with_window(WindowSpec::Fixed { k });
        let r = scan::scan(&t, bound.max_n, bound.max_m)?;
        for hit in r.hits {
            out.push((k, hit));
        }
    }
    Ok(out)
}

/// Deduplicate scan hits into the certificate's exception list, sorted by
/// `n`, then `m`, then digit.
pub(super) fn dedupe_exceptions(hits: &[(u64, ScanHit)]) -> Vec<Exception> {
    let set: BTreeSet<Exception> = hits
        .iter()
        .map(|(_, h)| Exception { n: h.n, m: h.m, a: h.a })
        .collect();
    set.into_iter().collect()
}

/// Find the branch of `branches` that covers window size `k`: an exact
/// fixed branch wins, otherwise the all-from branch reaching down to `k`.
pub(super) fn covering_branch(branches: &[Branch], k: u64) -> Option<&Branch> {
    branches
        .iter()
        .find(|b| b.window == WindowSpec::Fixed { k })
        .or_else(|| {
            branches
                .iter()
                .find(|b| matches!(b.window, WindowSpec::AllFrom { min_k } if min_k <= k))
        })
}

/// Cross-check every scanned hit against the lattice claims: a genuine
/// solution with `m` beyond a branch's scanned tail must sit in a feasible
/// class of that branch, or the branch's claim is wrong.
fn check_hits_against_branches(
    subproofs: &[Subproof],
    hits: &[(u64, ScanHit)],
) -> Result<()> {
    for (k, hit) in hits {
        let Some(sub) = subproofs.iter().find(|s| s.digit == hit.a) else {
            return Err(Error::Internal(format!(
                "scan found digit {} but no subproof covers it",
                hit.a
            )));
        };
        let Some(branch) = covering_branch(&sub.branches, *k) else {
            return Err(Error::Internal(format!(
                "no branch of digit {} covers window size {k}",
                hit.a
            )));
        };
        let st = &branch.final_state;
        if hit.m > st.m_tail_checked && !st.feasible.contains(&(hit.n % st.l, hit.m % st.m)) {
            return Err(Error::Internal(format!(
                "sieve excluded the verified solution (n = {}, m = {}, a = {})",
                hit.n, hit.m, hit.a
            )));
        }
    }
    Ok(())
}

/// Run the full automated proof.
///
/// Validates the target and bounds, checks the soundness guards, plans and
/// runs the branches for every digit, scans for small solutions, verifies
/// that none of them contradicts the lattice claims, and assembles the
/// certificate.  Surviving residue classes yield a `residual` conclusion —
/// a legitimate outcome, not an error.
pub fn prove(
    target: &TargetForm,
    pool: &[u64],
    strategy: Strategy,
    lattice_cap: u64,
    small_case_bound: SmallCaseBound,
) -> Result<Certificate> {
    target.validate()?;
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    if lattice_cap == 0 {
        return Err(Error::NonPositiveBound { name: "lattice_cap" });
    }
    let ks = soundness_guards(target, &small_case_bound)?;

    let digits = target.digits();
    let plans = plan_branches(target, pool, &digits);
    let mut subproofs = Vec::new();
    for &a in &digits {
        let mut branches = Vec::new();
        for plan in plans.get(&a).expect("plan for every digit") {
            let branch_target = target.with_digit(a).with_window(plan.window);
            let (steps, final_state) = match plan.kind {
                PlanKind::Sieve => sieve_branch(&branch_target, pool, strategy, lattice_cap)?,
                PlanKind::Extension { modulus } => {
                    let init = ConstraintState::initial(&branch_target);
                    let step = apply_window_extension(
                        &init,
                        &branch_target,
                        plan.window.min_k(),
                        modulus,
                    )?;
                    let st = step.state_after().clone();
                    (vec![step], st)
                }
            };
            if final_state.m_tail_checked > small_case_bound.max_m {
                return Err(Error::TailBeyondSearchBound {
                    m_tail: final_state.m_tail_checked,
                    max_m: small_case_bound.max_m,
                });
            }
            branches.push(Branch { window: plan.window, steps, final_state });
        }
        subproofs.push(Subproof { digit: a, branches });
    }

    let hits = collect_small_hits(target, &small_case_bound, &ks)?;
    check_hits_against_branches(&subproofs, &hits)?;
    let exceptions = dedupe_exceptions(&hits);

    let mut residual = Vec::new();
    for sub in &subproofs {
        for branch in &sub.branches {
            if !branch.final_state.is_empty() {
                residual.push(ResidualEntry {
                    digit: sub.digit,
                    window: branch.window,
                    state: branch.final_state.clone(),
                });
            }
        }
    }
    let conclusion = if residual.is_empty() {
        Conclusion::Empty
    } else {
        Conclusion::Residual { residual }
    };

    Ok(Certificate {
        schema: SCHEMA_VERSION,
        target: target.clone(),
        pool: pool.to_vec(),
        strategy,
        lattice_cap,
        small_case_bound,
        subproofs,
        exceptions,
        conclusion,
    })
}
