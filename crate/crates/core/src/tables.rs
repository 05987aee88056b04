//! The four classical reference tables of residue cycles that drive the
//! built-in nonexistence proofs, recomputed on demand (never hard-coded).

use crate::error::{Error, Result};
use crate::modular;
use crate::recurrence::RecurrenceSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Moduli of table 1: single balancing terms.
pub const TABLE1_MODULI: [u64; 8] = [3, 4, 5, 7, 8, 9, 11, 20];
/// Moduli of table 2: products of two consecutive balancing terms.
pub const TABLE2_MODULI: [u64; 2] = [5, 100];
/// Moduli of table 3: single Lucas-balancing terms.
pub const TABLE3_MODULI: [u64; 3] = [5, 7, 8];
/// Moduli of table 4: Lucas-balancing window products, all sizes `k ≥ 1`.
pub const TABLE4_MODULI: [u64; 3] = [5, 7, 8];

/// One row of a reference table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    /// Row number where the classical layout shows one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row_no: Option<u32>,
    pub modulus: u64,
    /// One minimal period of the residue cycle the row tabulates.
    pub values: Vec<u64>,
    /// The cycle's period, where the classical layout shows one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    /// Residues attained by products of two or more consecutive terms
    /// (table 4 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_set: Option<Vec<u64>>,
}

/// Compute reference table 1, 2, 3, or 4.
pub fn table(which: u8) -> Result<Vec<TableRow>> {
    let bal = RecurrenceSpec::balancing();
    let luc = RecurrenceSpec::lucas_balancing();
    match which {
        1 => TABLE1_MODULI
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                let c = modular::residue_cycle(&bal, q)?;
                Ok(TableRow {
                    row_no: Some(i as u32 + 1),
                    modulus: q,
                    period: Some(c.period as u64),
                    values: c.values,
                    product_set: None,
                })
            })
            .collect(),
        2 => TABLE2_MODULI
            .iter()
            .map(|&q| {
                let c = modular::product_residue_cycle(&bal, 1, q)?;
                Ok(TableRow {
                    row_no: None,
                    modulus: q,
                    period: Some(c.period as u64),
                    values: c.values,
                    product_set: None,
                })
            })
            .collect(),
        3 => TABLE3_MODULI
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                let c = modular::residue_cycle(&luc, q)?;
                Ok(TableRow {
                    row_no: Some(i as u32 + 1),
                    modulus: q,
                    period: Some(c.period as u64),
                    values: c.values,
                    product_set: None,
                })
            })
            .collect(),
        4 => TABLE4_MODULI
            .iter()
            .map(|&q| {
                let c = modular::residue_cycle(&luc, q)?;
                let sets = modular::product_residue_sets(&luc, 1, q)?;
                let union: BTreeSet<u64> = sets.into_iter().flatten().collect();
                Ok(TableRow {
                    row_no: None,
                    modulus: q,
                    period: None,
                    values: c.values,
                    product_set: Some(union.into_iter().collect()),
                })
            })
            .collect(),
        other => Err(Error::InvalidTarget(format!(
            "unknown table {other}, expected 1..=4"
        ))),
    }
}
