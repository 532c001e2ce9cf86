//! Error type shared by every module, with the CLI exit-code mapping.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input validation failure (bad parameter, malformed file, bad config).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Elevation angle outside the domain of the requested formula.
    #[error("invalid elevation angle: {0} rad")]
    InvalidAngle(f64),

    /// The acoustic ray cannot penetrate the given layer at this grazing angle.
    #[error("total internal reflection at profile layer {layer}")]
    TotalReflection { layer: usize },

    /// Target and anchor occupy the same point; direction is undefined.
    #[error("target and anchor positions coincide")]
    CoincidentPoints,

    /// Measurement covariance length does not match the Jacobian row count.
    #[error("dimension mismatch: {expected} measurement rows, {got} variances")]
    DimensionMismatch { expected: usize, got: usize },

    /// Fisher information matrix is singular or ill-conditioned.
    #[error("singular FIM (condition number {cond:.3e})")]
    SingularFim { cond: f64 },

    /// An operation requiring a minimum anchor count got fewer.
    #[error("too few anchors: need {needed}, got {got}")]
    TooFewAnchors { needed: usize, got: usize },

    /// No point (or no grid cell) satisfies the coverage rule.
    #[error("no coverage: the coverage rule holds nowhere in the queried set")]
    NoCoverage,

    /// The drift model overflowed to infinity at a queried distance.
    #[error("INS divergence model overflowed (variance is not finite)")]
    Diverged,

    /// The exponential fit failed from every initialization.
    #[error("divergence fit did not converge from any grid start")]
    FitDiverged,

    /// Not enough samples to identify the divergence model.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Every candidate in an optimization sweep failed layout or coverage.
    #[error("all candidates infeasible")]
    AllInfeasible,

    /// Scaling law queried on a plan whose coverage discs overlap.
    #[error("negative inter-cluster gap d_h1 = {d_h1:.3} m (seamless coverage; scaling law inapplicable)")]
    NegativeGap { d_h1: f64 },

    /// The stable-navigation margin stays positive for arbitrarily large gaps.
    #[error("maximum coverage side is unbounded for this divergence model (beta2 = 0)")]
    UnboundedSide,

    /// Simulated path does not intersect the deployment region.
    #[error("path does not intersect the deployment region")]
    PathOutsideRegion,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 validation, 3 infeasible/no-coverage,
    /// 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::InvalidAngle(_)
            | Error::CoincidentPoints
            | Error::DimensionMismatch { .. }
            | Error::TooFewAnchors { .. }
            | Error::InsufficientData { .. }
            | Error::PathOutsideRegion
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => 2,
            Error::NoCoverage
            | Error::AllInfeasible
            | Error::NegativeGap { .. }
            | Error::UnboundedSide => 3,
            Error::TotalReflection { .. }
            | Error::SingularFim { .. }
            | Error::Diverged
            | Error::FitDiverged => 4,
        }
    }
}
