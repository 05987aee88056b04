//! Target descriptions for the sieve: which window products of which
//! sequence are compared against which repdigits.

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Window selector: a single window size `k` (the product spans `k + 1`
/// consecutive terms), or every window size `k ≥ min_k` at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WindowSpec {
    #[serde(rename = "fixed")]
    Fixed { k: u64 },
    #[serde(rename = "all_from")]
    AllFrom { min_k: u64 },
}

impl WindowSpec {
    /// Smallest window size the selector covers.
    pub fn min_k(&self) -> u64 {
        match self {
            WindowSpec::Fixed { k } => *k,
            WindowSpec::AllFrom { min_k } => *min_k,
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Fixed { k } => write!(f, "k = {k}"),
            WindowSpec::AllFrom { min_k } => write!(f, "all k >= {min_k}"),
        }
    }
}

/// Digit selector: one digit, or every digit `1 ..= base_g − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitSpec {
    Fixed(u64),
    All,
}

impl Serialize for DigitSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DigitSpec::Fixed(a) => s.serialize_u64(*a),
            DigitSpec::All => s.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for DigitSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = DigitSpec;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a digit or the string \"all\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<DigitSpec, E> {
                Ok(DigitSpec::Fixed(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<DigitSpec, E> {
                if v < 0 {
                    return Err(E::custom("digit cannot be negative"));
                }
                Ok(DigitSpec::Fixed(v as u64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<DigitSpec, E> {
                if s == "all" {
                    Ok(DigitSpec::All)
                } else {
                    Err(E::custom(format!("expected \"all\", got {s:?}")))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// A full sieve target: window products of `spec` equated with base-`base_g`
/// repdigits `a·(g^m − 1)/(g − 1)` subject to `m ≥ min_m`, `n ≥ min_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetForm {
    pub spec: RecurrenceSpec,
    pub window: WindowSpec,
    pub digit: DigitSpec,
    pub base_g: u64,
    pub min_m: u64,
    pub min_n: u64,
}

impl TargetForm {
    /// Built-in target family, numbered 1–4:
    ///
    /// 1. single balancing terms vs. repdigits of at least two digits;
    /// 2. products of two or more consecutive balancing terms vs. repdigits
    ///    of at least two digits;
    /// 3. single Lucas-balancing terms vs. repdigits;
    /// 4. products of two or more consecutive Lucas-balancing terms vs.
    ///    repdigits.
    pub fn family(id: u8) -> Result<TargetForm> {
        let t = match id {
            1 => TargetForm {
                spec: RecurrenceSpec::balancing(),
                window: WindowSpec::Fixed { k: 0 },
                digit: DigitSpec::All,
                base_g: 10,
                min_m: 2,
                min_n: 1,
            },
            2 => TargetForm {
                spec: RecurrenceSpec::balancing(),
                window: WindowSpec::AllFrom { min_k: 1 },
                digit: DigitSpec::All,
                base_g: 10,
                min_m: 2,
                min_n: 1,
            },
            3 => TargetForm {
                spec: RecurrenceSpec::lucas_balancing(),
                window: WindowSpec::Fixed { k: 0 },
                digit: DigitSpec::All,
                base_g: 10,
                min_m: 1,
                min_n: 1,
            },
            4 => TargetForm {
                spec: RecurrenceSpec::lucas_balancing(),
                window: WindowSpec::AllFrom { min_k: 1 },
                digit: DigitSpec::All,
                base_g: 10,
                min_m: 1,
                min_n: 1,
            },
            other => {
                return Err(Error::InvalidTarget(format!(
                    "unknown target family {other}, expected 1..=4"
                )))
            }
        };
        Ok(t)
    }

    /// Default modulus pool for each built-in family, ordered so that the
    /// classical elimination arguments appear in the recorded steps.
    pub fn default_pool(id: u8) -> Result<Vec<u64>> {
        Ok(match id {
            1 => vec![10, 11, 3, 4, 5, 7, 8, 9, 17, 20],
            2 => vec![5, 100, 10],
            3 => vec![5, 7, 8],
            4 => vec![8, 5, 7],
            other => {
                return Err(Error::InvalidTarget(format!(
                    "unknown target family {other}, expected 1..=4"
                )))
            }
        })
    }

    /// Structural validation of the target fields.
    pub fn validate(&self) -> Result<()> {
        if self.base_g < 2 {
            return Err(Error::BaseTooSmall(self.base_g));
        }
        if self.min_m < 1 {
            return Err(Error::NonPositiveBound { name: "min_m" });
        }
        if self.min_n < 1 {
            return Err(Error::NonPositiveBound { name: "min_n" });
        }
        if let DigitSpec::Fixed(a) = self.digit {
            if a < 1 || a > self.base_g - 1 {
                return Err(Error::DigitOutOfRange { got: a, max: self.base_g - 1 });
            }
        }
        Ok(())
    }

    /// Concrete digits covered by this target, ascending.
    pub fn digits(&self) -> Vec<u64> {
        match self.digit {
            DigitSpec::Fixed(a) => vec![a],
            DigitSpec::All => (1..self.base_g).collect(),
        }
    }

    /// Copy with the digit pinned.
    pub fn with_digit(&self, a: u64) -> TargetForm {
        let mut t = self.clone();
        t.digit = DigitSpec::Fixed(a);
        t
    }

    /// Copy with the window replaced.
    pub fn with_window(&self, w: WindowSpec) -> TargetForm {
        let mut t = self.clone();
        t.window = w;
        t
    }
}
