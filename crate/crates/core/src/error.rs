//! Error type shared across the library.

use thiserror::Error;

/// Library-wide error enumeration.
///
/// Every rejected precondition maps to a dedicated variant so callers (and
/// the CLI) can report precise diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error(
        "recurrence coefficient q = {coeff_q} shares a factor with modulus {modulus}; \
         the state map is not invertible so the residue sequence need not be purely periodic"
    )]
    NonInvertibleStateMap { coeff_q: i64, modulus: u64 },

    #[error("base {base} and modulus {modulus} are not coprime")]
    NotCoprime { base: u64, modulus: u64 },

    #[error("negative index {0} is not defined for recurrence terms")]
    NegativeIndex(i64),

    #[error("index must be at least {min}, got {got}")]
    IndexTooSmall { min: u64, got: u64 },

    #[error("strong divisibility is only established for the balancing recurrence, got `{0}`")]
    StrongDivisibilityUnsupported(String),

    #[error("digit must lie in [1, {max}], got {got}")]
    DigitOutOfRange { got: u64, max: u64 },

    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u64),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("lattice size {size} exceeds cap {cap} while applying modulus {modulus}")]
    LatticeCapExceeded { size: u128, cap: u64, modulus: u64 },

    #[error("step inapplicable: {0}")]
    StepInapplicable(String),

    #[error("modulus pool must be nonempty")]
    EmptyPool,

    #[error("bound `{name}` must be positive")]
    NonPositiveBound { name: &'static str },

    #[error(
        "cannot certify: terms of `{spec}` are not strictly increasing and positive \
         over the checked range (first violation near index {index})"
    )]
    NonMonotoneTerms { spec: String, index: u64 },

    #[error(
        "cannot certify: the window product at index {index} does not exceed every \
         repdigit of at most {max_m} digits, so the exhaustive small-case search \
         would be incomplete"
    )]
    GrowthBoundTooWeak { index: u64, max_m: u64 },

    #[error("small-m coverage {m_tail} exceeds the exhaustive search bound {max_m}")]
    TailBeyondSearchBound { m_tail: u64, max_m: u64 },

    #[error("window scan did not terminate within {0} window sizes; terms grow too slowly")]
    WindowScanUnbounded(u64),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
