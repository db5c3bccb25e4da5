use thiserror::Error;

use crate::coords::Family;
use num_complex::Complex64;

/// Errors produced by game construction and the equilibrium analyses.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SvoError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix {name} is not symmetric (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    AsymmetryExceedsTolerance {
        name: &'static str,
        asymmetry: f64,
        tolerance: f64,
    },

    #[error("matrix {0} is numerically singular")]
    SingularSystem(&'static str),

    #[error("player {player}: own-action block A is not positive definite at theta = 0")]
    NotWellPosedAtZero { player: usize },

    #[error("player {player}: theta = {theta} is within tolerance of or beyond the well-posedness cutoff {cutoff}")]
    NearCutoff {
        player: usize,
        theta: f64,
        cutoff: f64,
    },

    #[error("SVO-Nash system is singular at theta = ({0}, {1})")]
    SingularAtTheta(f64, f64),

    #[error("angle {0} is outside the admissible range [0, pi/2]")]
    AngleOutOfRange(f64),

    #[error("theta = ({0}, {1}) lies on the boundary of the open box (0, pi/2)^2")]
    BoundaryTheta(f64, f64),

    #[error("invalid curve coordinate: {0}")]
    InvalidCoordinate(String),

    #[error("factor {0} of the expansion core is singular")]
    SingularCoreFactor(&'static str),

    #[error("expansion core for {family} at param {param} is numerically defective (eigenvector condition {condition:e})")]
    DefectiveCore {
        family: Family,
        param: f64,
        condition: f64,
    },

    #[error("t = {t} is within tolerance of the blow-up point of eigenvalue {lambda}")]
    NearBlowup { t: f64, lambda: Complex64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("control cost R for player {player} at step {step} is not positive definite")]
    ControlCostNotPd { player: usize, step: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

impl SvoError {
    /// Stable machine-readable kind, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::DimensionMismatch(_) => "DimensionMismatch",
            Self::AsymmetryExceedsTolerance { .. } => "AsymmetryExceedsTolerance",
            Self::SingularSystem(_) => "SingularSystem",
            Self::NotWellPosedAtZero { .. } => "NotWellPosedAtZero",
            Self::NearCutoff { .. } => "NearCutoff",
            Self::SingularAtTheta(..) => "SingularAtTheta",
            Self::AngleOutOfRange(_) => "AngleOutOfRange",
            Self::BoundaryTheta(..) => "BoundaryTheta",
            Self::InvalidCoordinate(_) => "InvalidCoordinate",
            Self::SingularCoreFactor(_) => "SingularCoreFactor",
            Self::DefectiveCore { .. } => "DefectiveCore",
            Self::NearBlowup { .. } => "NearBlowup",
            Self::PreconditionFailed(_) => "PreconditionFailed",
            Self::Eigen(_) => "Eigen",
            Self::ShapeMismatch(_) => "ShapeMismatch",
            Self::ControlCostNotPd { .. } => "ControlCostNotPD",
            Self::InvalidArgument(_) => "InvalidArgument",
            Self::Scenario(_) => "Scenario",
        }
    }
}

pub type Result<T, E = SvoError> = std::result::Result<T, E>;
