use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DomainError,
    #[error("empty intersection of enclosures")]
    EmptyIntersection,
    #[error("matrix is singular or too ill-conditioned to verify its inverse")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("enclosure diverged at t = {time}")]
    Divergence { time: f64 },
    #[error("step rejected at t = {time} with h = {step:e}")]
    StepRejected { time: f64, step: f64 },
    #[error("no crossing of the section before t = {time}")]
    NoCrossing { time: f64 },
    #[error("transversality could not be verified near t = {time}")]
    TangencyRisk { time: f64 },
    #[error("sign of the section function is ambiguous near t = {time}")]
    SignAmbiguous { time: f64 },
    #[error("derivative of the Poincaré map has complex eigenvalues")]
    ComplexEigenvalues,
    #[error("multiplier 1 is not simple (closest other multiplier at distance {distance:e})")]
    DegenerateMultiplier { distance: f64 },
    #[error("operation requires an affine section")]
    UnsupportedSection,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
