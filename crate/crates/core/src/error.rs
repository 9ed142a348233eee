use alloc::string::String;

/// Failures of the numerical routines.
///
/// Every variant has a stable [`Error::name`] that the command-line layer
/// prints on failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("turning points are degenerate (closest pair {separation:.3e} apart)")]
    DegenerateTurningPoints { separation: f64 },
    #[error("point lies on a branch cut of sqrt(V)")]
    OnBranchCut,
    #[error("quadrature did not converge: change {change:.3e} at {nodes} nodes")]
    QuadratureNotConverged { change: f64, nodes: usize },
    #[error("Stokes line trace stalled (step length {step:.3e})")]
    TraceStalled { step: f64 },
    #[error("Stokes graph has unterminated lines")]
    UnresolvedTopology,
    #[error("Newton iteration diverged after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("Stokes graph at the solution is {label:?}, not \"320\"")]
    NotType320 { label: String },
    #[error("quantum numbers must be positive, got ({n}, {m})")]
    InvalidQuantumNumbers { n: i64, m: i64 },
    #[error("quantum pair ({n}, {m}) is not primitive")]
    NotPrimitive { n: u32, m: u32 },
    #[error("integration path passes within {distance:.3e} of a turning point")]
    PathNearTurningPoint { distance: f64 },
    #[error("ODE integration did not reach the target within the step budget")]
    OdeToleranceNotMet,
    #[error("psi_0 and psi_{k} are numerically dependent")]
    DependentBasis { k: i32 },
    #[error("refined pole is {distance:.3e} from the seed, outside the disc of radius {radius:.3e}")]
    OutsideDisc { distance: f64, radius: f64 },
    #[error("asymptotic seeds disagree by {mismatch:.3e}")]
    SeedNotConverged { mismatch: f64 },
    #[error("Laurent fit residual {residual:.3e} above tolerance")]
    PoleFitFailed { residual: f64 },
    #[error("step size underflow at z = {re} + {im}i")]
    StepUnderflow { re: f64, im: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateTurningPoints { .. } => "DegenerateTurningPoints",
            Error::OnBranchCut => "OnBranchCut",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::TraceStalled { .. } => "TraceStalled",
            Error::UnresolvedTopology => "UnresolvedTopology",
            Error::NewtonDiverged { .. } => "NewtonDiverged",
            Error::NotType320 { .. } => "NotType320",
            Error::InvalidQuantumNumbers { .. } => "InvalidQuantumNumbers",
            Error::NotPrimitive { .. } => "NotPrimitive",
            Error::PathNearTurningPoint { .. } => "PathNearTurningPoint",
            Error::OdeToleranceNotMet => "OdeToleranceNotMet",
            Error::DependentBasis { .. } => "DependentBasis",
            Error::OutsideDisc { .. } => "OutsideDisc",
            Error::SeedNotConverged { .. } => "SeedNotConverged",
            Error::PoleFitFailed { .. } => "PoleFitFailed",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::InsufficientData(_) => "InsufficientData",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
