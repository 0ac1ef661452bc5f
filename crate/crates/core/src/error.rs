use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interpolation nodes are not pairwise distinct")]
    NodesNotDistinct,
    #[error("interpolation targets are not pairwise distinct")]
    TargetsNotDistinct,
    #[error("point outside the open polydisc: {0}")]
    OutsideDisc(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("disc datum is not extremal (minimum Pick eigenvalue {min_eigenvalue:e})")]
    NotExtremal { min_eigenvalue: f64 },
    #[error("the two points passed to eta_for coincide")]
    EqualAlphas,
    #[error("intermediate convex combination coincides with the next parameter at variable {var}")]
    DegenerateCombination { var: usize },
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("invalid geodesic parameters: {0}")]
    InvalidParameters(String),
    #[error("Newton inversion did not converge after {starts} starts (best residual {best_residual:e})")]
    NoConvergence { starts: usize, best_residual: f64 },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("recovered weights lie on the simplex boundary; data are lower dimensional")]
    LowerDimensional,
    #[error("scale ratios disagree: |σ*/σ| = {sigma_ratio}, |τ*/τ| = {tau_ratio}")]
    InconsistentRatio { sigma_ratio: f64, tau_ratio: f64 },
    #[error("two-point subproblem ({i}, {j}) is unsolvable")]
    UnsolvablePair { i: usize, j: usize },
    #[error("datum is strictly inside the extremal scale (scale {scale})")]
    NotExtremalDatum { scale: f64 },
    #[error("datum is unsolvable (extremal scale {scale} < 1)")]
    UnsolvableDatum { scale: f64 },
    #[error("degenerate problem: no one-variable interpolant matches the third value")]
    IncompatibleDegenerateThirdValue,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NodesNotDistinct => "NodesNotDistinct",
            Error::TargetsNotDistinct => "TargetsNotDistinct",
            Error::OutsideDisc(_) => "OutsideDisc",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotExtremal { .. } => "NotExtremal",
            Error::EqualAlphas => "EqualAlphas",
            Error::DegenerateCombination { .. } => "DegenerateCombination",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DegenerateData(_) => "DegenerateData",
            Error::LowerDimensional => "LowerDimensional",
            Error::InconsistentRatio { .. } => "InconsistentRatio",
            Error::UnsolvablePair { .. } => "UnsolvablePair",
            Error::NotExtremalDatum { .. } => "NotExtremalDatum",
            Error::UnsolvableDatum { .. } => "UnsolvableDatum",
            Error::IncompatibleDegenerateThirdValue => "IncompatibleDegenerateThirdValue",
        }
    }
}
