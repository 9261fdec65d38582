use thiserror::Error;

/// Every failure the engine can report. Variants carry enough context to
/// tell the caller which input to change.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix dimension {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("degenerate spectrum: eigenvalue gap {gap:.3e} below tolerance {tol:.3e}")]
    Degenerate { gap: f64, tol: f64 },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("state has zero norm")]
    ZeroState,
    #[error("jump operator annihilates the state")]
    AnnihilatedState,
    #[error("integration step too coarse: local error estimate {estimate:.3e} exceeds 1e-6")]
    StepUnderflow { estimate: f64 },
    #[error("overlap between final and initial state vanishes; phase undefined")]
    ZeroOverlap,
    #[error("expectation value vanishes; phase undefined")]
    ZeroExpectation,
    #[error("branch lost at loop point {point}: best overlap {overlap:.3}")]
    BranchLost { point: usize, overlap: f64 },
    #[error("branch index {index} out of range (dimension {dim})")]
    BranchOutOfRange { index: usize, dim: usize },
    #[error("Schmidt weights vary along the loop by {variation:.3e}")]
    WeightsVary { variation: f64 },
    #[error("Schmidt spectrum is degenerate (gap {gap:.3e})")]
    SchmidtDegenerate { gap: f64 },
    #[error("discontinuity indicator does not change across [0, {kappa_max}]")]
    NoTransition { kappa_max: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short machine-readable label, used for CSV status columns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "non_square",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TooLarge(_) => "too_large",
            Error::NonFinite(_) => "non_finite",
            Error::Degenerate { .. } => "degenerate",
            Error::NoConvergence => "no_convergence",
            Error::ZeroState => "zero_state",
            Error::AnnihilatedState => "annihilated_state",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::ZeroOverlap => "zero_overlap",
            Error::ZeroExpectation => "zero_expectation",
            Error::BranchLost { .. } => "branch_lost",
            Error::BranchOutOfRange { .. } => "branch_out_of_range",
            Error::WeightsVary { .. } => "weights_vary",
            Error::SchmidtDegenerate { .. } => "schmidt_degenerate",
            Error::NoTransition { .. } => "no_transition",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidParameter(_) => "invalid_parameter",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
