use thiserror::Error;

/// Failures surfaced by the geometry kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has an eigenvalue at -1; principal logarithm undefined")]
    EigenvalueAtMinusOne,
    #[error("orthogonal matrix has negative determinant ({det})")]
    OrientationMismatch { det: f64 },
    #[error("matrix is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("value {value} out of range for arcsin")]
    ValueOutOfRange { value: f64 },
    #[error("subspaces are orthogonal in some direction (smallest cosine {smallest:e})")]
    SubspaceAngleTooLarge { smallest: f64 },
    #[error("tangent vectors live at different base points")]
    BaseMismatch,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("decomposition did not converge")]
    DecompositionFailed,
    #[error("parse error: {0}")]
    ParseError(String),
}

impl Error {
    /// Single-token name used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EigenvalueAtMinusOne => "EigenvalueAtMinusOne",
            Error::OrientationMismatch { .. } => "OrientationMismatch",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::NotSkew { .. } => "NotSkew",
            Error::DimensionError(_) => "DimensionError",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::SubspaceAngleTooLarge { .. } => "SubspaceAngleTooLarge",
            Error::BaseMismatch => "BaseMismatch",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DecompositionFailed => "DecompositionFailed",
            Error::ParseError(_) => "ParseError",
        }
    }

    /// Whether the failure comes from input validation rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotOrthonormal { .. }
                | Error::NotSkew { .. }
                | Error::DimensionError(_)
                | Error::BaseMismatch
                | Error::ParseError(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
