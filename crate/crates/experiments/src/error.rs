use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] poincare_core::Error),
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

/// Short marker for a failed row; free of commas and spaces.
pub fn error_marker(e: &poincare_core::Error) -> &'static str {
    use poincare_core::Error::*;
    match e {
        DomainError => "domain-error",
        EmptyIntersection => "empty-intersection",
        SingularMatrix => "singular-matrix",
        DimensionMismatch { .. } => "dimension-mismatch",
        Divergence { .. } => "divergence",
        StepRejected { .. } => "step-rejected",
        NoCrossing { .. } => "no-crossing",
        TangencyRisk { .. } => "tangency-risk",
        SignAmbiguous { .. } => "sign-ambiguous",
        ComplexEigenvalues => "complex-eigenvalues",
        DegenerateMultiplier { .. } => "degenerate-multiplier",
        UnsupportedSection => "unsupported-section",
        InvalidInput(_) => "invalid-input",
    }
}
