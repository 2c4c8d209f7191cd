use lampwalk::constructions::ConstructionError;
use lampwalk::coupling::CouplingError;
use lampwalk::group::GroupError;
use lampwalk::harmonic::HarmonicError;
use lampwalk::walk::MeasureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::SupportOverflow { .. } | MeasureError::PrecisionOverflow => CliError::Cap(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureOverflow { .. } | GroupError::MemoryCap(_) => CliError::Cap(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        match e {
            CouplingError::Measure(m) => m.into(),
            CouplingError::Group(g) => g.into(),
            CouplingError::InvariantViolation { .. } | CouplingError::MixtureMismatch => CliError::Invariant(e.to_string()),
            CouplingError::InfiniteClassSuspected { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<HarmonicError> for CliError {
    fn from(e: HarmonicError) -> Self {
        match e {
            HarmonicError::SolverDiverged { .. }
            | HarmonicError::MetricUnavailable { .. }
            | HarmonicError::SupportEscapesWindow { .. } => CliError::Cap(e.to_string()),
            HarmonicError::BoundaryTouched(_) | HarmonicError::ShapeMismatch(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Group(g) => g.into(),
            ConstructionError::Measure(m) => m.into(),
            ConstructionError::CapExceeded { .. } | ConstructionError::MetricUnavailable { .. } => {
                CliError::Cap(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}
