//! Schreier graphs, harmonic functions and the cocycles built from them.

mod cg;
mod da;
mod graph;
mod symz;
mod voltage;
mod zwz;

pub use cg::{conjugate_gradient, CgReport, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use da::{
    da_build, da_energy, da_energy_closed_form, da_harmonic, da_rule_energy, da_rule_energy_limit, da_step, da_template,
    DaEnergy, DaGraph, DaGroup, DaLetter, DaSolve, EdgeDeviation, EdgeKind, RootTreatment, TreeVertex,
};
pub use graph::{
    growth_profile, harmonicity_residual, harmonicity_residual_on, GrowthRow, ResidualReport, Scalar, ScalarField,
    SchreierGraph,
};
pub use symz::{symz_cocycle, symz_cocycle_identity, symz_field, symz_graph, symz_h, symz_slice_bound, symz_step};
pub use voltage::{
    eta_check, eta_step, voltage_solve, wreath_voltage_cocycle, EtaReport, VoltageField, VoltageMethod, VoltageParams,
    WreathZd,
};
pub use zwz::{theta_step, zwz_cocycle, zwz_cocycle_identity, ZwZ};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::Group;
use crate::walk::{prob_to_big, StepDistribution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("interior vertex {0} is missing a neighbor")]
    BoundaryTouched(usize),
    #[error("step law atom {0} is not a generator of the graph")]
    UnknownGenerator(String),
    #[error("field has {got} values, graph has {expected} vertices")]
    FieldSize { expected: usize, got: usize },
    #[error("support of {element} reaches {reach}, window is {window}")]
    SupportEscapesWindow { element: String, reach: i64, window: i64 },
    #[error("solver stopped after {iterations} iterations with residual {residual:e}")]
    SolverDiverged { iterations: usize, residual: f64 },
    #[error("simple random walk on Z^{0} is recurrent: no finite-energy unit flow")]
    RecurrentRegime(usize),
    #[error("radius {radius} is beyond the explored ball (reach {reach})")]
    MetricUnavailable { radius: usize, reach: usize },
    #[error("graph shape differs from the expected core-and-rays picture: {0}")]
    ShapeMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Values of `b(g)` at the points where it is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleSlice<P: Ord> {
    pub element: String,
    pub values: BTreeMap<P, BigRational>,
}

impl<P: Ord + Clone> CocycleSlice<P> {
    pub fn new(element: String, values: impl IntoIterator<Item = (P, BigRational)>) -> Self {
        Self {
            element,
            values: values.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, p: &P) -> BigRational {
        self.values.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn norm_sq(&self) -> BigRational {
        self.values.values().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> BigRational {
        self.values.values().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

/// `Σ_g μ(g) b(g)` for a cocycle given slice by slice.
pub fn cocycle_mean<G, P, F>(d: &StepDistribution<G>, mut slice: F) -> Result<CocycleSlice<P>, HarmonicError>
where
    G: Group,
    P: Ord + Clone,
    F: FnMut(&G::Elem) -> Result<CocycleSlice<P>, HarmonicError>,
{
    let mut acc: BTreeMap<P, BigRational> = BTreeMap::new();
    let mut atoms: Vec<_> = d.measure().iter().map(|(g, p)| (d.group.key(g), g.clone(), p)).collect();
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, g, p) in atoms {
        let w = prob_to_big(p);
        for (x, v) in slice(&g)?.values {
            *acc.entry(x).or_insert_with(BigRational::zero) += v * &w;
        }
    }
    Ok(CocycleSlice::new("mean".into(), acc))
}
