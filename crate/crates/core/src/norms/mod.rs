//! Norms on `R^k` described by a closed recursive grammar, their
//! dilation-quotient distance, and the sampling machinery that bounds it
//! from below.
//!
//! The distance between two norms `N`, `N'` is `ln(M/m)` where `m, M` are
//! the best constants with `m N <= N' <= M N`. On a sample domain that
//! meets every ray through the origin once, that is exactly the spread of
//! `ln(N'(x)/N(x))`; finite samples therefore produce certified lower
//! bounds, which closed forms for the recognized families turn into exact
//! values.

mod domain;
mod estimate;
mod spec;

pub use domain::{DomainKind, SampleDomain};
pub use estimate::{
    dual_norm_eval, estimate_distance, estimate_distance_opts, log_ratios, log_restriction,
    precompose_invariance_check, spread_on_points, EstimateOptions, NormDistanceEstimate,
    PrecomposeReport,
};
pub use spec::{
    check_norm_axioms, distance_closed_form, AxiomReport, AxiomWitness, MixtureAtom, Norm,
    NormSpec, PValue, WeightedTerm,
};

use thiserror::Error;

/// Relative threshold for the invertibility guard on precomposition
/// matrices (pivoted elimination, pivots against the largest entry).
pub const SINGULARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("p must lie in [1, inf], got {0}")]
    BadExponent(f64),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("weighted-abs functionals do not span R^{k}")]
    DegenerateFunctionals { k: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("off-center sphere needs a nonzero center")]
    ZeroCenter,
    #[error("sample domain has no points")]
    EmptyDomain,
    #[error("domain point {index} misses its sphere by {residual:e}")]
    PointOffSphere { index: usize, residual: f64 },
}
