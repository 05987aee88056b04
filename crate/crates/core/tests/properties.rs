//! Cross-cutting property tests: modular cycles against exact big-integer
//! arithmetic, classical identities, certificate determinism, and tamper
//! rejection.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use repsieve_core::modular;
use repsieve_core::recurrence::RecurrenceSpec;
use repsieve_core::repdigit::{classify_repdigit, repdigit_value, RepdigitForm};
use repsieve_core::scan;
use repsieve_core::sieve::{
    prove, verify_certificate, Certificate, SmallCaseBound, Strategy, TargetForm,
    DEFAULT_LATTICE_CAP,
};

fn big_mod(v: &BigInt, q: u64) -> u64 {
    let m = v % BigInt::from(q);
    let m = if m < BigInt::zero() { m + BigInt::from(q) } else { m };
    u64::try_from(m).expect("reduced residue fits u64")
}

fn spec(lucas: bool) -> RecurrenceSpec {
    if lucas {
        RecurrenceSpec::lucas_balancing()
    } else {
        RecurrenceSpec::balancing()
    }
}

proptest! {
    /// Index divisibility and term divisibility coincide for the balancing
    /// sequence.
    #[test]
    fn strong_divisibility(m in 1u64..=40, n in 1u64..=200) {
        let (i, t) = RecurrenceSpec::balancing()
            .divides_index_iff_divides_term(m, n)
            .unwrap();
        prop_assert_eq!(i, t);
    }

    /// Residue cycles agree with exact terms reduced mod q.
    #[test]
    fn residue_cycle_matches_terms(lucas in any::<bool>(), q in 2u64..=50, n in 0u64..=50) {
        let s = spec(lucas);
        let cyc = modular::residue_cycle(&s, q).unwrap();
        prop_assert_eq!(cyc.value_at(n), big_mod(&s.term(n).value, q));
    }

    /// Product cycles agree with exact window products reduced mod q.
    #[test]
    fn product_cycle_matches_products(
        lucas in any::<bool>(),
        q in 2u64..=40,
        k in 0u64..=4,
        n in 1u64..=30,
    ) {
        let s = spec(lucas);
        let pc = modular::product_residue_cycle(&s, k, q).unwrap();
        prop_assert_eq!(pc.value_at(n), big_mod(&s.consecutive_product(n, k).unwrap(), q));
    }

    /// Tail-plus-cycle repunit residues agree with exact repunits.
    #[test]
    fn repunit_replay(g in prop::sample::select(vec![2u64, 10]), q in 2u64..=50, m in 1u64..=60) {
        let ru = modular::repunit_cycle(g, q).unwrap();
        let exact = (BigInt::from(g).pow(m as u32) - BigInt::one()) / BigInt::from(g - 1);
        prop_assert_eq!(ru.value_at(m), big_mod(&exact, q));
    }

    /// The reported multiplicative order is an order and is minimal.
    #[test]
    fn multiplicative_order_is_minimal(g in prop::sample::select(vec![2u64, 3, 10]), q in 2u64..=60) {
        use num_integer::Integer;
        prop_assume!(g.gcd(&q) == 1);
        let e = modular::multiplicative_order(g, q).unwrap();
        let pow = |exp: u64| big_mod(&BigInt::from(g).pow(exp as u32), q);
        prop_assert_eq!(pow(e), 1 % q);
        for d in 1..e {
            if e % d == 0 {
                prop_assert_ne!(pow(d), 1 % q);
            }
        }
    }

    /// The rank of apparition indexes a term divisible by the modulus.
    #[test]
    fn rank_of_apparition_hits_zero(q in 2u64..=60) {
        let s = RecurrenceSpec::balancing();
        if let Some(r) = modular::rank_of_apparition(&s, q).unwrap() {
            prop_assert_eq!(big_mod(&s.term(r).value, q), 0);
        }
    }

    /// The two companion sequences satisfy the hyperbola identity
    /// C² − 8·B² = 1 at every index.
    #[test]
    fn companion_identity(n in 0u64..=200) {
        let b = RecurrenceSpec::balancing().term(n).value;
        let c = RecurrenceSpec::lucas_balancing().term(n).value;
        prop_assert_eq!(&c * &c - BigInt::from(8) * &b * &b, BigInt::one());
    }

    /// Joint product sets contain the residue of every admissible window.
    #[test]
    fn product_sets_cover_all_windows(
        lucas in any::<bool>(),
        q in 2u64..=30,
        min_k in 1u64..=3,
        n in 1u64..=20,
        extra in 0u64..=5,
    ) {
        let s = spec(lucas);
        let seq = modular::residue_cycle(&s, q).unwrap();
        let sets = modular::product_residue_sets(&s, min_k, q).unwrap();
        let k = min_k + extra;
        let r = big_mod(&s.consecutive_product(n, k).unwrap(), q);
        let class = (n % seq.period as u64) as usize;
        prop_assert!(sets[class].contains(&r));
    }

    /// Repdigit construction and classification are mutually inverse.
    #[test]
    fn repdigit_round_trip(g in 2u64..=16, m in 1u64..=12, a_raw in 1u64..=15) {
        let a = 1 + a_raw % (g - 1);
        let form = RepdigitForm::new(g, a, m).unwrap();
        let v = repdigit_value(&form);
        prop_assert_eq!(classify_repdigit(&v, g), Some(form));
    }

    /// Both built-in sequences are strictly increasing and positive wherever
    /// the inductive growth certificate says so.
    #[test]
    fn certified_growth_is_real(lucas in any::<bool>(), hi in 2u64..=300) {
        let s = spec(lucas);
        prop_assert!(s.has_certified_growth());
        prop_assert_eq!(s.first_non_increasing_index(1, hi), None);
    }

    /// Products of three or more consecutive balancing terms are divisible
    /// by 10 — the fact behind the window-extension step.
    #[test]
    fn triple_balancing_products_divisible_by_ten(n in 1u64..=30, k in 2u64..=6) {
        let p = RecurrenceSpec::balancing().consecutive_product(n, k).unwrap();
        prop_assert_eq!(big_mod(&p, 10), 0);
    }
}

fn family_cert(id: u8) -> Certificate {
    prove(
        &TargetForm::family(id).unwrap(),
        &TargetForm::default_pool(id).unwrap(),
        Strategy::PoolOrder,
        DEFAULT_LATTICE_CAP,
        SmallCaseBound::DEFAULT,
    )
    .unwrap()
}

/// The same prove call twice yields byte-identical JSON.
#[test]
fn certificates_are_bit_reproducible() {
    for id in [2u8, 3] {
        let a = family_cert(id).to_json();
        let b = family_cert(id).to_json();
        assert_eq!(a, b, "family {id}");
    }
}

/// The certificate's exception list equals what an independent scan of the
/// same target finds.
#[test]
fn exceptions_agree_with_an_independent_scan() {
    for id in 1..=4u8 {
        let target = TargetForm::family(id).unwrap();
        let cert = family_cert(id);
        let r = scan::scan(&target, 300, 150).unwrap();
        let scanned: Vec<(u64, u64, u64)> = r.hits.iter().map(|h| (h.n, h.m, h.a)).collect();
        let listed: Vec<(u64, u64, u64)> =
            cert.exceptions.iter().map(|e| (e.n, e.m, e.a)).collect();
        assert_eq!(scanned, listed, "family {id}");
    }
}

/// Any change to a recorded state must be caught, whether it adds or
/// removes a surviving class.
#[test]
fn random_state_tampering_is_rejected() {
    let base = family_cert(3);
    assert!(verify_certificate(&base).accepted);
    for digit_idx in 0..base.subproofs.len() {
        let mut c = base.clone();
        let step = &mut c.subproofs[digit_idx].branches[0].steps[0];
        let state = match step {
            repsieve_core::sieve::Step::ResidueIntersection { state_after, .. } => state_after,
            _ => unreachable!("family 3 records only intersections"),
        };
        if state.feasible.is_empty() {
            state.feasible.insert((0, 0));
        } else {
            let first = *state.feasible.iter().next().unwrap();
            state.feasible.remove(&first);
        }
        let v = verify_certificate(&c);
        assert!(!v.accepted, "tampering digit index {digit_idx} went unnoticed");
        let d = v.divergence.unwrap();
        assert_eq!(d.field, "step");
        assert_eq!(d.digit, Some(base.subproofs[digit_idx].digit));
    }
}

/// JSON round-trips preserve certificates exactly.
#[test]
fn certificate_json_round_trip() {
    let cert = family_cert(4);
    let j = cert.to_json();
    let back = Certificate::from_json(&j).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back).accepted);
    assert_eq!(back.to_json(), j);
}
