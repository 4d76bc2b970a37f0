//! Error types for geometry, coverage and certification.

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("body is empty")]
    EmptyBody,
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector must be nonzero")]
    ZeroVector,
    #[error("vector cannot be normalized exactly in this backend")]
    NotNormalizable,
    #[error("plank offsets must satisfy lo <= hi")]
    InvalidPlank,
    #[error("operation requires dimension 2, got {0}")]
    NotPlanar(usize),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoverageError {
    #[error("cell budget exceeded: {planks} planks need 2^{planks} cells, budget {budget}")]
    CellBudgetExceeded { planks: usize, budget: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("planks do not cover the body")]
    NotCovered,
    #[error("no peeling order exists")]
    NoOrder,
    #[error("search budget of {0} residual evaluations exhausted")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("planks do not cover the body")]
    NotCovered,
    #[error("order is not a permutation of the plank indices")]
    NotPermutation,
    #[error("order invalid: residual at step {step} is not convex")]
    InvalidOrder { step: usize },
    #[error("dilation witness failed: containment margin {margin}")]
    WitnessFailure { margin: f64 },
    #[error("supporting hyperplanes do not straddle the plank as required")]
    CaseMismatch,
    #[error("peeling consumed every plank but the residual is still nonempty")]
    IncompleteChain,
    #[error(transparent)]
    Coverage(#[from] CoverageError),
}

impl From<GeometryError> for SearchError {
    fn from(e: GeometryError) -> Self {
        SearchError::Coverage(CoverageError::Geometry(e))
    }
}

impl From<GeometryError> for CertifyError {
    fn from(e: GeometryError) -> Self {
        CertifyError::Coverage(CoverageError::Geometry(e))
    }
}
