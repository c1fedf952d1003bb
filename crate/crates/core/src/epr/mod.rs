//! Schmidt structure of bipartite pure states and the EPR property.

mod construct;
mod criterion;
mod predictive;
mod schmidt;

pub use construct::{bijection_check, construct_epr_state, CONSTRUCT_TOL};
pub use criterion::{
    commutant_dimension, commutant_is_scalar, commutation_threshold, epr_algebra_contains, is_epr,
    is_epr_with, EprReport, ObservableVerdict,
};
pub use predictive::{predictive_map, PredictiveMap};
pub use schmidt::{
    schmidt_decompose, AntiunitaryImbedding, SchmidtDecomposition, SpectrumTable, ISOMETRY_TOL,
};
