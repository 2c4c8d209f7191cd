//! Diagonal products with prescribed FC-center, lower bounds for their word
//! metric, the commutator-support check for lamp generators, and the
//! total-variation plateau of lazy lamplighter walks.

mod delta;
mod embed;
mod plateau;

pub use delta::{
    build_delta, delta_d8, dinfty_delta, fc_class, fc_preset_step, kernel_generator, validate_relative_abelianization,
    DeltaSpec, FactorMetrics, FcClass,
};
pub use embed::{copy_check, embed_s3, hall_chain, regular_representation, CopyReport, EmbeddingSpec};
pub use plateau::{plateau_experiment, plateau_step, Lamplighter, PlateauReport, PlateauRow};

use thiserror::Error;

use crate::group::GroupError;
use crate::walk::MeasureError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("factor {s} fails the relative abelianization check: {reason}")]
    ValidationFailed { s: usize, reason: String },
    #[error("conjugacy closure exceeded {cap} elements; suspected infinite class")]
    CapExceeded { cap: usize },
    #[error("factor {s}: component not within the precomputed radius {radius}")]
    MetricUnavailable { s: usize, radius: usize },
    #[error("invalid construction data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}
