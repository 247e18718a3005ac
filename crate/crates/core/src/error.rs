use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("time grid mismatch: expected {expected} samples, got {actual}")]
    GridMismatch { expected: usize, actual: usize },

    #[error("singular Volterra step at index {step}: |1 + w ℓ(0)| = {pivot:e}")]
    Singular { step: usize, pivot: f64 },

    #[error("Picard series did not converge: {terms} terms, last term sup-norm {last:e} (tol {tol:e})")]
    NotConverged { terms: usize, last: f64, tol: f64 },

    #[error("normal trace did not converge: partial sums {half:e} (N/2) and {full:e} (N)")]
    TraceNotConverged { half: f64, full: f64 },

    #[error("boundary signal is missing time derivatives: {0}")]
    MissingDerivatives(String),

    #[error("identity check failed: {what} residual {residual:e} exceeds {tol:e}")]
    IdentityCheck { what: String, residual: f64, tol: f64 },

    #[error("degenerate symbol: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::BasisMismatch(_) => "basis_mismatch",
            Error::GridMismatch { .. } => "grid_mismatch",
            Error::Singular { .. } => "singular",
            Error::NotConverged { .. } => "not_converged",
            Error::TraceNotConverged { .. } => "trace_not_converged",
            Error::MissingDerivatives(_) => "missing_derivatives",
            Error::IdentityCheck { .. } => "identity_check",
            Error::Degenerate(_) => "degenerate",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
