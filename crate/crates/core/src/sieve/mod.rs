//! Congruence sieve: targets, constraint states, elimination steps,
//! certificates, the automated prover, and the replaying verifier.

pub mod certificate;
pub mod ops;
pub mod prover;
pub mod state;
pub mod step;
pub mod target;
pub mod verify;

pub use certificate::{
    Branch, Certificate, Conclusion, Exception, ResidualEntry, SmallCaseBound, Strategy,
    Subproof, SCHEMA_VERSION,
};
pub use ops::{apply_divisibility_cascade, apply_residue_intersection, apply_window_extension};
pub use prover::{prove, DEFAULT_LATTICE_CAP};
pub use state::ConstraintState;
pub use step::{ProductEvidence, Step};
pub use target::{DigitSpec, TargetForm, WindowSpec};
pub use verify::{verify_certificate, Divergence, VerifyOutcome};
