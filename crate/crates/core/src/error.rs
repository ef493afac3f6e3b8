use thiserror::Error;

/// Errors raised by the operator, frame, and representation layers.
#[derive(Debug, Error)]
pub enum QframeError {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },

    #[error("unsupported dimension {dim} for {kind} frame: {reason}")]
    UnsupportedDimension {
        kind: &'static str,
        dim: usize,
        reason: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch in {context}: expected {expected}, found {found}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("operator is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("state is neither positive (min eigenvalue {min_eigenvalue:e}) nor normalized (trace {trace})")]
    NotPositiveNorNormalized { min_eigenvalue: f64, trace: f64 },

    #[error("effect {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NegativeEffect { index: usize, min_eigenvalue: f64 },

    #[error("effects do not sum to the identity (max entry deviation {deviation:e})")]
    IncompletePovm { deviation: f64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("not a frame: {0}")]
    NotAFrame(String),

    #[error("frames are not a dual pair (residual {residual:e})")]
    NotDual { residual: f64 },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("convention undefined: {0}")]
    Convention(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("kernel of {n} points exceeds the materialization limit of {limit}; use the factored on-the-fly star product")]
    KernelTooLarge { n: usize, limit: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("failed to generate a spanning frame after {0} attempts")]
    SpanFailure(usize),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, QframeError>;
