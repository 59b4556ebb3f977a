//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular operator: condition estimate {cond:.3e} exceeds {limit:.3e}")]
    SingularOperator { cond: f64, limit: f64 },

    #[error("singular Gram matrix in {context}")]
    SingularGram { context: &'static str },

    #[error("singular group element")]
    SingularGroupElement,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tangent vector is not horizontal: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotHorizontal { residual: f64, tolerance: f64 },

    #[error("mix geodesic leaves its domain: 1 + 2*B*t = {value:.3e} at coordinate {index}")]
    MixDomain { index: usize, value: f64 },

    #[error("unsupported metric for {op}: {metric}")]
    UnsupportedMetric {
        op: &'static str,
        metric: &'static str,
    },

    #[error("orbit curve parameter alpha must be nonzero")]
    ZeroAlpha,

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("root find failed: {0}")]
    RootFind(String),

    #[error("insufficient budget: need at least {needed} matrix-vector products, got {got}")]
    InsufficientBudget { needed: usize, got: usize },

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("bad IDX magic: 0x{0:08x}")]
    BadMagic(u32),

    #[error("truncated IDX payload: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },

    #[error("inapplicable mask: {0}")]
    InapplicableMask(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("experiment failed: {0}")]
    ExperimentFailed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
