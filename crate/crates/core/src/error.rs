//! Error types shared across the crate.

use thiserror::Error;

use crate::hermite::MAX_DEGREE;

/// Errors for density algebra, entropy functionals and channel analyses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variance must be positive and finite, got {0}")]
    InvalidVariance(f64),

    #[error("Hermite degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeOverflow(usize),

    #[error("a degree-0 coefficient is not a valid perturbation direction")]
    ConstantDirection,

    #[error("scale factor must be nonzero and finite")]
    DegenerateScale,

    #[error("perturbation too large: a composite density fails the positivity check")]
    PerturbationTooLarge,

    #[error("density is not nonnegative on the quadrature window")]
    NonpositiveDensity,

    #[error("unsupported degree k = {0} for this operation")]
    UnsupportedDegree(usize),

    #[error("no sign change found for {name} in ({lo}, {hi}]")]
    NoRoot { name: String, lo: f64, hi: f64 },

    #[error("gap function is indeterminate at h = 0, u = 0")]
    IndeterminatePoint,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid fading law: {0}")]
    InvalidFadingLaw(String),

    #[error("fading law JSON: {0}")]
    FadingLawJson(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
