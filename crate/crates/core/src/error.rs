use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re}+{im}i violates the disk boundary guard (|z| must be < 1 - {guard:e})")]
    BoundaryGuard { re: f64, im: f64, guard: f64 },

    #[error("invalid weight r = {0}: must be finite and > 2")]
    InvalidWeight(f64),

    #[error("weight r = {0} is not an integer; the exact discrete-series cocycle needs integer r")]
    NonIntegerWeight(f64),

    #[error("invalid SU(1,1) element: |a|^2 - |b|^2 = {0} is not positive")]
    InvalidGroupElement(f64),

    #[error(
        "integrand not integrable: measure exponent {s} plus decay exponent {decay} must exceed 1"
    )]
    Integrability { s: f64, decay: f64 },

    #[error("quadrature order too small: {0}")]
    OrderTooSmall(String),

    #[error("non-finite integrand value at node {index} ({re}+{im}i)")]
    NonFinite { index: usize, re: f64, im: f64 },

    #[error("orbit enumeration exceeded the entry cap of {0}")]
    EntryCapExceeded(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("radius {requested} is beyond the reliable radius {reliable} of the orbit table; enumerate deeper")]
    BeyondReliableRadius { requested: f64, reliable: f64 },

    #[error("orbit table too shallow: {0}")]
    InsufficientDepth(String),

    #[error("Poincare-type series does not appear to converge: last shell {last:e} >= previous shell {previous:e}")]
    NonConvergence { last: f64, previous: f64 },

    #[error("truncation tail {tail:e} of the coherent-state expansion exceeds {limit:e}")]
    TruncationTail { tail: f64, limit: f64 },

    #[error("region mask removed every quadrature node")]
    EmptyMask,

    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(f64, f64),

    #[error("invariance spot-check failed: residual {0:e}")]
    InvarianceViolation(f64),

    #[error("point {re}+{im}i is outside the fundamental domain")]
    OutsideDomain { re: f64, im: f64 },

    #[error("singular value decomposition failed to converge")]
    SvdFailure,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
