use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("velocity is not horizontal (defect {defect:e})")]
    NonHorizontal { defect: f64 },

    #[error("covelocity is off the unit level set (h0^2 + |h|^2 = {value})")]
    NotUnitLevel { value: f64 },

    #[error("matrix is not in SO(n): {0}")]
    NotSpecialOrthogonal(String),

    #[error("point is not in the cut locus")]
    NotInCutLocus,

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("{stage} did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure {
        stage: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("invalid geodesic parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    /// Short machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonHorizontal { .. } => "NonHorizontal",
            Error::NotUnitLevel { .. } => "NotUnitLevel",
            Error::NotSpecialOrthogonal(_) => "NotSpecialOrthogonal",
            Error::NotInCutLocus => "NotInCutLocus",
            Error::RootNotBracketed { .. } => "RootNotBracketed",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::InvalidParams(_) => "InvalidParams",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
