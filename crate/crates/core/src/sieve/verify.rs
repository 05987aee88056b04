//! Certificate verification by full replay.
//!
//! The verifier trusts nothing in the certificate beyond the target, the
//! step kinds and their knobs (modulus, divisor, prime, base window): it
//! recomputes every piece of modular evidence, every refined state, the
//! exhaustive small-case scan, and the conclusion, and compares them field
//! by field against what the certificate records.  The modulus pool and
//! strategy are provenance metadata — steps carry their own evidence — so
//! certificates produced from reordered pools are judged on equal terms.

use super::certificate::{Certificate, Conclusion, ResidualEntry, SCHEMA_VERSION};
use super::ops::{
    apply_divisibility_cascade, apply_residue_intersection, apply_window_extension,
};
use super::prover::{
    collect_small_hits, covering_branch, dedupe_exceptions, soundness_guards,
};
use super::state::ConstraintState;
use super::step::Step;
use super::target::WindowSpec;
use serde::{Deserialize, Serialize};

/// Where and how a certificate failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// Digit of the subproof involved, when applicable.
    pub digit: Option<u64>,
    /// Branch index within the subproof, when applicable.
    pub branch: Option<usize>,
    /// Step index within the branch, when applicable.
    pub step: Option<usize>,
    /// Which part of the certificate diverged.
    pub field: String,
    /// Human-readable explanation.
    pub detail: String,
}

impl Divergence {
    fn global(field: &str, detail: String) -> Self {
        Divergence { digit: None, branch: None, step: None, field: field.into(), detail }
    }
}

/// Verification verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub accepted: bool,
    pub divergence: Option<Divergence>,
}

/// Replay and check a certificate end to end.  Never panics on malformed
/// input; every defect is reported as a [`Divergence`].
pub fn verify_certificate(cert: &Certificate) -> VerifyOutcome {
    match check(cert) {
        Ok(()) => VerifyOutcome { accepted: true, divergence: None },
        Err(d) => VerifyOutcome { accepted: false, divergence: Some(d) },
    }
}

fn check(cert: &Certificate) -> Result<(), Divergence> {
    if cert.schema != SCHEMA_VERSION {
        return Err(Divergence::global(
            "schema",
            format!("unsupported schema {}, expected {}", cert.schema, SCHEMA_VERSION),
        ));
    }
    cert.target
        .validate()
        .map_err(|e| Divergence::global("target", e.to_string()))?;
    if cert.lattice_cap == 0 {
        return Err(Divergence::global("lattice_cap", "cap must be positive".into()));
    }

    // Soundness guards must hold for the claim to mean anything.
    let ks = soundness_guards(&cert.target, &cert.small_case_bound)
        .map_err(|e| Divergence::global("soundness_guards", e.to_string()))?;

    // One subproof per digit, in ascending digit order.
    let digits = cert.target.digits();
    let cert_digits: Vec<u64> = cert.subproofs.iter().map(|s| s.digit).collect();
    if cert_digits != digits {
        return Err(Divergence::global(
            "subproofs",
            format!("digits covered {cert_digits:?}, expected {digits:?}"),
        ));
    }

    for sub in &cert.subproofs {
        let at = |branch: Option<usize>, step: Option<usize>, field: &str, detail: String| {
            Divergence { digit: Some(sub.digit), branch, step, field: field.into(), detail }
        };

        // Branch windows must jointly cover the target's window selector.
        let windows: Vec<WindowSpec> = sub.branches.iter().map(|b| b.window).collect();
        match cert.target.window {
            WindowSpec::Fixed { k } => {
                if windows != vec![WindowSpec::Fixed { k }] {
                    return Err(at(
                        None,
                        None,
                        "branches",
                        format!("windows {windows:?} do not cover k = {k}"),
                    ));
                }
            }
            WindowSpec::AllFrom { min_k } => {
                let covered = match windows.split_last() {
                    Some((WindowSpec::AllFrom { min_k: w }, heads)) => {
                        *w >= min_k
                            && heads.len() as u64 == *w - min_k
                            && heads
                                .iter()
                                .enumerate()
                                .all(|(i, h)| *h == WindowSpec::Fixed { k: min_k + i as u64 })
                    }
                    _ => false,
                };
                if !covered {
                    return Err(at(
                        None,
                        None,
                        "branches",
                        format!("windows {windows:?} do not cover all k >= {min_k}"),
                    ));
                }
            }
        }

        for (bi, branch) in sub.branches.iter().enumerate() {
            let branch_target = cert.target.with_digit(sub.digit).with_window(branch.window);
            let mut state = ConstraintState::initial(&branch_target);
            for (si, recorded) in branch.steps.iter().enumerate() {
                let recomputed = match recorded {
                    Step::ResidueIntersection { modulus, .. } => apply_residue_intersection(
                        &state,
                        &branch_target,
                        *modulus,
                        cert.lattice_cap,
                    ),
                    Step::DivisibilityCascade { divisor_d, prime_p, .. } => {
                        apply_divisibility_cascade(
                            &state,
                            &branch_target,
                            *divisor_d,
                            *prime_p,
                            cert.lattice_cap,
                        )
                    }
                    Step::WindowExtension { base_window, modulus, .. } => {
                        apply_window_extension(&state, &branch_target, *base_window, *modulus)
                    }
                };
                let recomputed = recomputed.map_err(|e| {
                    at(Some(bi), Some(si), "step", format!("step does not apply: {e}"))
                })?;
                if &recomputed != recorded {
                    return Err(at(
                        Some(bi),
                        Some(si),
                        "step",
                        "recorded evidence or state differs from recomputation".into(),
                    ));
                }
                state = recomputed.state_after().clone();
            }
            if branch.final_state != state {
                return Err(at(
                    Some(bi),
                    None,
                    "final_state",
                    "final state differs from the replayed steps".into(),
                ));
            }
            if state.m_tail_checked > cert.small_case_bound.max_m {
                return Err(at(
                    Some(bi),
                    None,
                    "m_tail_checked",
                    format!(
                        "small-length coverage {} exceeds the scan bound {}",
                        state.m_tail_checked, cert.small_case_bound.max_m
                    ),
                ));
            }
        }
    }

    // Exceptions: recompute the exhaustive scan and demand exact agreement
    // (no forged, missing, or misordered entries).
    let hits = collect_small_hits(&cert.target, &cert.small_case_bound, &ks)
        .map_err(|e| Divergence::global("exceptions", format!("scan failed: {e}")))?;
    let expected = dedupe_exceptions(&hits);
    if expected != cert.exceptions {
        return Err(Divergence::global(
            "exceptions",
            format!("recomputed {expected:?}, certificate lists {:?}", cert.exceptions),
        ));
    }

    // No verified solution may be excluded by the (replayed) lattices.
    for (k, hit) in &hits {
        let sub = cert
            .subproofs
            .iter()
            .find(|s| s.digit == hit.a)
            .expect("digit coverage checked above");
        let Some(branch) = covering_branch(&sub.branches, *k) else {
            return Err(Divergence {
                digit: Some(hit.a),
                branch: None,
                step: None,
                field: "branches".into(),
                detail: format!("no branch covers window size {k}"),
            });
        };
        let st = &branch.final_state;
        if hit.m > st.m_tail_checked && !st.feasible.contains(&(hit.n % st.l, hit.m % st.m)) {
            return Err(Divergence {
                digit: Some(hit.a),
                branch: None,
                step: None,
                field: "lattice".into(),
                detail: format!(
                    "solution (n = {}, m = {}) lies outside every surviving class",
                    hit.n, hit.m
                ),
            });
        }
    }

    // Conclusion: recompute the residual list from the replayed branches.
    let mut residual = Vec::new();
    for sub in &cert.subproofs {
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
    let expected_conclusion = if residual.is_empty() {
        Conclusion::Empty
    } else {
        Conclusion::Residual { residual }
    };
    if expected_conclusion != cert.conclusion {
        return Err(Divergence::global(
            "conclusion",
            "conclusion does not follow from the replayed branches".into(),
        ));
    }
    Ok(())
}
