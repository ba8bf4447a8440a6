use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the state algebra, the propagators and the analytic models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state vector is identically zero")]
    ZeroVector,
    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },
    #[error("dimension {dimension} is too small (need at least 2)")]
    DimensionTooSmall { dimension: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },
    #[error("eigendecomposition failed: {0}")]
    EigFailure(String),
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("propagated state vanished at t = {t}")]
    VanishingState { t: f64 },
    #[error("step size too large: renormalization correction {correction:e} at t = {t}")]
    StepSizeTooLarge { t: f64, correction: f64 },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse: {samples} samples (need at least 3)")]
    GridTooCoarse { samples: usize },
    #[error("degenerate trajectory: zero path length but final angle {theta_t:e}")]
    DegenerateTrajectory { theta_t: f64 },
    #[error("non-positive gap {gap}")]
    NonPositiveGap { gap: f64 },
    #[error("initial state has zero overlap with the target")]
    ZeroOverlap,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::EigFailure(_)
                | Error::NumericalInconsistency(_)
                | Error::VanishingState { .. }
                | Error::StepSizeTooLarge { .. }
                | Error::DegenerateTrajectory { .. }
        )
    }
}
