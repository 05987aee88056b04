//! Exhaustive small-case search: which window products in a bounded index
//! range are repdigits?  The sieve uses this both to collect the genuine
//! small solutions (the certificate's exceptions) and to cross-check its
//! own emptiness claims.

use crate::error::{Error, Result};
use crate::repdigit::classify_repdigit;
use crate::sieve::target::{DigitSpec, TargetForm, WindowSpec};
use crate::threads;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Safety cap on how many window sizes an `all_from` scan may enumerate
/// before concluding that the products do not outgrow the repdigit bound.
pub(crate) const WINDOW_SIZE_CAP: u64 = 10_000;

mod bigint_as_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|e| de::Error::custom(format!("invalid integer literal: {e}")))
    }
}

/// One solution found by the scan: the window product starting at `n` is
/// the repdigit with digit `a` repeated `m` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    pub n: u64,
    pub m: u64,
    pub a: u64,
    #[serde(with = "bigint_as_string")]
    pub value: BigInt,
}

/// A window product in range that is a repdigit *longer* than the
/// classification bound `max_digits`; reported separately so the caller
/// knows the bound clipped something.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutOfRangeHit {
    pub n: u64,
    pub m: u64,
    pub a: u64,
}

/// Full scan output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub target: TargetForm,
    pub max_n: u64,
    pub max_digits: u64,
    /// Hits sorted by `n`, then `m`, then `a`; duplicates arising from
    /// several window sizes with the same `(n, m, a)` are merged.
    pub hits: Vec<ScanHit>,
    /// Repdigit window products whose length exceeds `max_digits`, within
    /// the scanned `(n, window)` grid.
    pub out_of_range: Vec<OutOfRangeHit>,
}

/// The window sizes a scan of the target must cover so that every solution
/// with at most `max_digits` digits appears.
///
/// For a fixed window this is just that window.  For `all_from` the
/// enumeration stops at the first size whose *smallest* product (the one at
/// `n = min_n`; terms grow, so products grow in `n`) already exceeds every
/// repdigit of `max_digits` digits — larger windows only overshoot further.
/// Termination within [`WINDOW_SIZE_CAP`] sizes is enforced.
pub(crate) fn window_sizes(target: &TargetForm, max_digits: u64) -> Result<Vec<u64>> {
    match target.window {
        WindowSpec::Fixed { k } => Ok(vec![k]),
        WindowSpec::AllFrom { min_k } => {
            if !target.spec.has_certified_growth() {
                let index = target.spec.first_non_increasing_index(1, 64).unwrap_or(0);
                return Err(Error::NonMonotoneTerms {
                    spec: target.spec.name.clone(),
                    index,
                });
            }
            let exp = u32::try_from(max_digits)
                .map_err(|_| Error::NonPositiveBound { name: "max_digits" })?;
            let bound = BigInt::from(target.base_g).pow(exp) - BigInt::one();
            let mut ks = Vec::new();
            let mut k = min_k;
            loop {
                if k - min_k >= WINDOW_SIZE_CAP {
                    return Err(Error::WindowScanUnbounded(WINDOW_SIZE_CAP));
                }
                let smallest = target.spec.consecutive_product(target.min_n, k)?;
                if smallest > bound {
                    break;
                }
                ks.push(k);
                k += 1;
            }
            Ok(ks)
        }
    }
}

/// Scan all starting indices `min_n ≤ n ≤ max_n` (and, for `all_from`
/// windows, every admissible window size) for window products that are
/// base-`g` repdigits of at most `max_digits` digits, honoring the target's
/// digit and minimum-length filters.
///
/// The work is split over starting indices and merged back in index order,
/// so the output is independent of thread count.
pub fn scan(target: &TargetForm, max_n: u64, max_digits: u64) -> Result<ScanResult> {
    target.validate()?;
    if max_n == 0 {
        return Err(Error::NonPositiveBound { name: "max_n" });
    }
    if max_digits == 0 {
        return Err(Error::NonPositiveBound { name: "max_digits" });
    }
    let ks = window_sizes(target, max_digits)?;
    let max_k = ks.iter().copied().max().unwrap_or(0);

    let mut hits: Vec<ScanHit> = Vec::new();
    let mut out_of_range: Vec<OutOfRangeHit> = Vec::new();
    if target.min_n <= max_n && !ks.is_empty() {
        let terms = target.spec.terms_up_to(max_n + max_k);
        let terms = &terms;
        let ks = &ks;
        type PerIndex = (BTreeMap<(u64, u64), BigInt>, BTreeSet<(u64, u64)>);
        let per_index: Vec<PerIndex> = threads::pool().install(|| {
            (target.min_n..=max_n)
                .into_par_iter()
                .map(|n| {
                    let mut found: BTreeMap<(u64, u64), BigInt> = BTreeMap::new();
                    let mut clipped: BTreeSet<(u64, u64)> = BTreeSet::new();
                    // Window sizes are consecutive, so each extends the last
                    // product by one factor.
                    let mut prod = BigInt::one();
                    let mut upto = n; // product currently covers terms[n..upto]
                    for &k in ks {
                        while upto <= n + k {
                            prod *= &terms[upto as usize];
                            upto += 1;
                        }
                        let Some(form) = classify_repdigit(&prod, target.base_g) else {
                            continue;
                        };
                        if form.length_m < target.min_m {
                            continue;
                        }
                        if let DigitSpec::Fixed(a) = target.digit {
                            if form.digit_a != a {
                                continue;
                            }
                        }
                        if form.length_m <= max_digits {
                            found.insert((form.length_m, form.digit_a), prod.clone());
                        } else {
                            clipped.insert((form.length_m, form.digit_a));
                        }
                    }
                    (found, clipped)
                })
                .collect()
        });
        for (i, (found, clipped)) in per_index.into_iter().enumerate() {
            let n = target.min_n + i as u64;
            for ((m, a), value) in found {
                hits.push(ScanHit { n, m, a, value });
            }
            for (m, a) in clipped {
                out_of_range.push(OutOfRangeHit { n, m, a });
            }
        }
    }

    Ok(ScanResult { target: target.clone(), max_n, max_digits, hits, out_of_range })
}
