//! Second-order integer recurrences and exact term computation.
//!
//! A [`RecurrenceSpec`] fixes the recurrence `x_{n+1} = p·x_n + q·x_{n-1}`
//! together with its two seeds. Terms are exact arbitrary-precision
//! integers; two built-in specs are provided:
//!
//! * `balancing`: `p = 6, q = -1`, seeds `0, 1` — the sequence
//!   `0, 1, 6, 35, 204, …`
//! * `lucas_balancing`: same coefficients, seeds `1, 3` — the sequence
//!   `1, 3, 17, 99, 577, …`

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Coefficients and seeds defining `x_{n+1} = coeff_p·x_n + coeff_q·x_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub name: String,
    pub coeff_p: i64,
    pub coeff_q: i64,
    pub seed0: i64,
    pub seed1: i64,
}

/// One exact term of a recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigTerm {
    pub index: u64,
    pub value: BigInt,
}

impl RecurrenceSpec {
    /// The balancing sequence `0, 1, 6, 35, 204, …`.
    pub fn balancing() -> Self {
        RecurrenceSpec {
            name: "balancing".to_string(),
            coeff_p: 6,
            coeff_q: -1,
            seed0: 0,
            seed1: 1,
        }
    }

    /// The Lucas-balancing sequence `1, 3, 17, 99, 577, …`.
    pub fn lucas_balancing() -> Self {
        RecurrenceSpec {
            name: "lucas_balancing".to_string(),
            coeff_p: 6,
            coeff_q: -1,
            seed0: 1,
            seed1: 3,
        }
    }

    /// Look a built-in spec up by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "balancing" => Some(Self::balancing()),
            "lucas_balancing" => Some(Self::lucas_balancing()),
            _ => None,
        }
    }

    /// True when the numeric content equals the balancing recurrence,
    /// regardless of the `name` field.
    pub fn is_balancing(&self) -> bool {
        self.coeff_p == 6 && self.coeff_q == -1 && self.seed0 == 0 && self.seed1 == 1
    }

    /// Exact `n`-th term. Uses linear iteration for small indices and
    /// matrix index-doubling for isolated large ones; the two methods are
    /// proven equal by tests.
    pub fn term(&self, n: u64) -> BigTerm {
        // Beyond this point doubling wins over naive iteration.
        const DOUBLING_THRESHOLD: u64 = 1024;
        if n <= DOUBLING_THRESHOLD {
            self.term_by_iteration(n)
        } else {
            self.term_by_doubling(n)
        }
    }

    /// Exact `n`-th term via straightforward linear iteration.
    pub fn term_by_iteration(&self, n: u64) -> BigTerm {
        let mut prev = BigInt::from(self.seed0);
        if n == 0 {
            return BigTerm { index: 0, value: prev };
        }
        let mut cur = BigInt::from(self.seed1);
        let p = BigInt::from(self.coeff_p);
        let q = BigInt::from(self.coeff_q);
        for _ in 1..n {
            let next = &p * &cur + &q * &prev;
            prev = cur;
            cur = next;
        }
        BigTerm { index: n, value: cur }
    }

    /// Exact `n`-th term via 2×2 matrix power with index doubling.
    ///
    /// With `M = [[p, q], [1, 0]]` one has
    /// `M^n · (x_1, x_0)ᵀ = (x_{n+1}, x_n)ᵀ`, so the term is read off the
    /// second row of `M^n`.
    pub fn term_by_doubling(&self, n: u64) -> BigTerm {
        if n == 0 {
            return BigTerm { index: 0, value: BigInt::from(self.seed0) };
        }
        let m = Mat2::new(self.coeff_p, self.coeff_q).pow(n);
        let value = m.c * BigInt::from(self.seed1) + m.d * BigInt::from(self.seed0);
        BigTerm { index: n, value }
    }

    /// All terms `x_0 … x_max_n` as a vector (index = position).
    pub fn terms_up_to(&self, max_n: u64) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(max_n as usize + 1);
        out.push(BigInt::from(self.seed0));
        if max_n == 0 {
            return out;
        }
        out.push(BigInt::from(self.seed1));
        let p = BigInt::from(self.coeff_p);
        let q = BigInt::from(self.coeff_q);
        for i in 2..=max_n as usize {
            let next = &p * &out[i - 1] + &q * &out[i - 2];
            out.push(next);
        }
        out
    }

    /// Exact product of the `k + 1` consecutive terms `x_n · x_{n+1} ⋯ x_{n+k}`.
    ///
    /// Products start at `n ≥ 1`: index 0 would let a zero seed trivialize
    /// every window.
    pub fn consecutive_product(&self, n: u64, k: u64) -> Result<BigInt> {
        if n < 1 {
            return Err(Error::IndexTooSmall { min: 1, got: n });
        }
        let terms = self.terms_up_to(n + k);
        let mut acc = BigInt::one();
        for t in &terms[n as usize..=(n + k) as usize] {
            acc *= t;
        }
        Ok(acc)
    }

    /// Returns the pair `(m | n, term(m) | term(n))` for property checks of
    /// the strong-divisibility law of the balancing sequence. Rejects other
    /// specs: the law is not claimed for them.
    pub fn divides_index_iff_divides_term(&self, m: u64, n: u64) -> Result<(bool, bool)> {
        if !self.is_balancing() {
            return Err(Error::StrongDivisibilityUnsupported(self.name.clone()));
        }
        if m < 1 {
            return Err(Error::IndexTooSmall { min: 1, got: m });
        }
        if n < 1 {
            return Err(Error::IndexTooSmall { min: 1, got: n });
        }
        let index_divides = n % m == 0;
        let tm = self.term(m).value;
        let tn = self.term(n).value;
        let term_divides = if tm.is_zero() {
            tn.is_zero()
        } else {
            (&tn % &tm).is_zero()
        };
        Ok((index_divides, term_divides))
    }

    /// Sufficient inductive condition for the terms to be positive and
    /// strictly increasing for every index `n ≥ 1`, which is what bounds
    /// every exhaustive search in this crate.
    ///
    /// With `p = coeff_p`, `q = coeff_q`: seeds `0 ≤ x_0 < x_1`, a strictly
    /// increasing base step `x_2 > x_1`, and for the induction
    /// `x_{n+1} − x_n = (p−1)·x_n + q·x_{n−1}`:
    /// if `q ≥ 0` require `p + q ≥ 2` (excludes flat sequences); if `q < 0`
    /// require `p + q ≥ 1`, which forces `p ≥ 2` and gives
    /// `x_{n+1} − x_n > (p + q − 1)·x_{n−1} ≥ 0`.
    pub fn has_certified_growth(&self) -> bool {
        let (p, q) = (self.coeff_p, self.coeff_q);
        let coeff_ok = p >= 1 && if q >= 0 { p + q >= 2 } else { p + q >= 1 };
        let seeds_ok = self.seed0 >= 0 && self.seed1 > self.seed0 && self.seed1 >= 1;
        if !(coeff_ok && seeds_ok) {
            return false;
        }
        let x2 = self.term(2).value;
        x2 > BigInt::from(self.seed1)
    }

    /// Checks that terms `x_lo … x_hi` are positive and strictly increasing.
    /// Returns the first violating index, if any. Property tests use this to
    /// cross-check [`Self::has_certified_growth`] numerically.
    pub fn first_non_increasing_index(&self, lo: u64, hi: u64) -> Option<u64> {
        let terms = self.terms_up_to(hi);
        let mut prev: Option<&BigInt> = None;
        for i in lo..=hi {
            let t = &terms[i as usize];
            if !t.is_positive() {
                return Some(i);
            }
            if let Some(p) = prev {
                if t <= p {
                    return Some(i);
                }
            }
            prev = Some(t);
        }
        None
    }
}

/// 2×2 integer matrix `[[a, b], [c, d]]` used for index doubling.
struct Mat2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mat2 {
    fn new(p: i64, q: i64) -> Self {
        Mat2 {
            a: BigInt::from(p),
            b: BigInt::from(q),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    fn identity() -> Self {
        Mat2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    fn pow(self, mut e: u64) -> Mat2 {
        let mut base = self;
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}
