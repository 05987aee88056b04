//! Repdigits `a·(g^m − 1)/(g − 1)`: exact values, classification of
//! integers, and bounded enumeration.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A repdigit in base `base_g`: the digit `digit_a` repeated `length_m`
/// times. Invariants: `base_g ≥ 2`, `1 ≤ digit_a ≤ base_g − 1`,
/// `length_m ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepdigitForm {
    #[serde(rename = "g")]
    pub base_g: u64,
    #[serde(rename = "a")]
    pub digit_a: u64,
    #[serde(rename = "m")]
    pub length_m: u64,
}

impl RepdigitForm {
    /// Validated constructor.
    pub fn new(base_g: u64, digit_a: u64, length_m: u64) -> Result<Self> {
        if base_g < 2 {
            return Err(Error::BaseTooSmall(base_g));
        }
        if digit_a < 1 || digit_a > base_g - 1 {
            return Err(Error::DigitOutOfRange { got: digit_a, max: base_g - 1 });
        }
        if length_m < 1 {
            return Err(Error::IndexTooSmall { min: 1, got: length_m });
        }
        Ok(RepdigitForm { base_g, digit_a, length_m })
    }
}

/// Exact integer value `digit_a · (base_g^length_m − 1)/(base_g − 1)`.
pub fn repdigit_value(form: &RepdigitForm) -> BigInt {
    let g = BigInt::from(form.base_g);
    let repunit = (g.pow(form.length_m as u32) - BigInt::one()) / (BigInt::from(form.base_g) - BigInt::one());
    repunit * BigInt::from(form.digit_a)
}

/// The unique repdigit form with the given value in the given base, or
/// `None` when the value is not positive or its base-`base_g` digits are
/// not all equal. Nonpositive inputs classify as absent rather than
/// erroring, which keeps scan loops branch-free.
pub fn classify_repdigit(value: &BigInt, base_g: u64) -> Option<RepdigitForm> {
    if base_g < 2 || !value.is_positive() {
        return None;
    }
    let g = BigInt::from(base_g);
    let mut rest = value.clone();
    let mut digit: Option<BigInt> = None;
    let mut length = 0u64;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&g);
        match &digit {
            None => digit = Some(r),
            Some(d) if *d == r => {}
            Some(_) => return None,
        }
        length += 1;
        rest = q;
    }
    let d = digit.expect("positive value has at least one digit");
    if d.is_zero() {
        // A trailing-zero repdigit would need digit 0, which is excluded.
        return None;
    }
    let digit_a = u64::try_from(d).expect("digit smaller than base fits in u64");
    Some(RepdigitForm { base_g, digit_a, length_m: length })
}

/// All `(base_g − 1) · max_digits` repdigit forms with `length_m ≤
/// max_digits`, in increasing value order.
pub fn enumerate_repdigits(base_g: u64, max_digits: u64) -> Result<Vec<RepdigitForm>> {
    if base_g < 2 {
        return Err(Error::BaseTooSmall(base_g));
    }
    if max_digits < 1 {
        return Err(Error::NonPositiveBound { name: "max_digits" });
    }
    let mut out = Vec::with_capacity(((base_g - 1) * max_digits) as usize);
    // All m-digit repdigits precede all (m+1)-digit ones, and within a
    // length the value grows with the digit.
    for m in 1..=max_digits {
        for a in 1..base_g {
            out.push(RepdigitForm { base_g, digit_a: a, length_m: m });
        }
    }
    Ok(out)
}
