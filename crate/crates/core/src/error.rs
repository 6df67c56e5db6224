use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    QuadratureDiverged {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("kernel quadrature failed at tau = {tau}: {source}")]
    KernelAt {
        tau: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("length mismatch: expected {expected} samples, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("time grids differ: {0}")]
    GridMismatch(String),

    #[error("time {t} outside [0, {t_max}]")]
    OutOfRange { t: f64, t_max: f64 },

    #[error("initial coherence is zero; normalized coherence is undefined")]
    ZeroInitialCoherence,

    #[error("state invariant violated at t = {t}: {what}")]
    InvariantViolation { t: f64, what: String },

    #[error("Hilbert-space dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
