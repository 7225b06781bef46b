//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("expected a form of degree at least {min}, got degree {got}")]
    DegreeTooLow { min: usize, got: usize },

    #[error("metric is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix does not square to -Id (residual {0:.3e})")]
    NotAlmostComplex(f64),

    #[error(
        "almost complex structure is not integrable (Nijenhuis residual {0:.3e}); \
         the bidegree splitting of d is invalid"
    )]
    NotIntegrable(f64),

    #[error("metric is not compatible with the complex structure (|g - JᵀgJ| = {0:.3e})")]
    IncompatibleMetric(f64),

    #[error("Lie algebra fails check_jacobi (residual {0:.3e})")]
    JacobiFailure(f64),

    #[error("holomorphic volume form is missing")]
    MissingOmega,

    #[error("volume form has a component outside type ({n},0) (residual {residual:.3e})")]
    OmegaWrongType { n: usize, residual: f64 },

    #[error(
        "Ω ∧ Ω̄ is not a positive multiple of the volume form (value {0:.3e}); \
         orientation mismatch"
    )]
    OrientationMismatch(f64),

    #[error(
        "Lee form convention fault: Λ_ω dω and J d*ω disagree by {0:.3e}; \
         internal sign conventions are inconsistent"
    )]
    LeeConventionFault(f64),

    #[error("matrix is not skew-hermitian (residual {0:.3e})")]
    NotSkewHermitian(f64),

    #[error("pairing is degenerate: block {0} has zero weight")]
    DegeneratePairing(usize),

    #[error("pairing blocks sum to {0}, connection rank is {1}")]
    PairingShapeMismatch(usize, usize),

    #[error("connection rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("{0} must be positive, got {1}")]
    NonPositive(&'static str, f64),

    #[error(
        "source violates the integral obstruction ∫(λ - iΛF) ωⁿ/n! = 0: \
         mean = {0:.3e}; the equation iΛ∂̄∂f = source has no solution"
    )]
    Obstruction(f64),

    #[error("grid size must be a positive even number, got {0}")]
    BadGridSize(usize),

    #[error("{0}")]
    Invalid(String),
}
