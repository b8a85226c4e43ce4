use thiserror::Error;

/// Errors produced by domain construction, norm computation, and the
/// compactness diagnostics.
#[derive(Debug, Error)]
pub enum SchauderError {
    #[error("invalid spacing: h = {0} (must be finite and > 0)")]
    InvalidSpacing(f64),

    #[error("resolution too coarse: no sample points at h = {0}")]
    ResolutionTooCoarse(f64),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("no connecting path between points {0} and {1}")]
    NoConnectingPath(usize, usize),

    #[error("index {index} out of range (count {count})")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("no pairs: the pair set is empty")]
    NoPairs,

    #[error("invalid exponent: alpha = {0} (must lie in (0, 1])")]
    InvalidAlpha(f64),

    #[error("order unavailable: derivatives of order {missing} not stored (requested m = {requested})")]
    OrderUnavailable { requested: usize, missing: usize },

    #[error("unsupported order: {0} (finite differences implemented for order <= 2)")]
    UnsupportedOrder(usize),

    #[error("insufficient grid support for finite differences at point {point} along axis {axis}")]
    InsufficientGridSupport { point: usize, axis: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("length mismatch: expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty part in covering")]
    EmptyPart,

    #[error("covering does not cover the ground set: point {0} uncovered")]
    NotACovering(usize),

    #[error("mismatched ground sets: {0} vs {1}")]
    MismatchedGroundSets(usize, usize),

    #[error("empty family")]
    EmptyFamily,

    #[error("duplicate label: {0}")]
    DuplicateLabel(String),

    #[error("non-finite input: member {member} at position {position}")]
    NonFiniteInput { member: usize, position: usize },

    #[error("not a valid eps/3-net: member {member} is at distance {distance} from the net (allowed {allowed})")]
    NotAValidEpsNet {
        member: usize,
        distance: f64,
        allowed: f64,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("hypothesis c[Omega] < infinity violated: domain is disconnected")]
    COmegaInfinite,

    #[error("missing derivatives: member {member} lacks derivative {eta}")]
    MissingDerivatives { member: usize, eta: String },

    #[error("metric requires data the members lack: {0}")]
    MetricUnavailable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, SchauderError>;
