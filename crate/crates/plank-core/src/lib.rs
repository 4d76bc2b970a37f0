//! Coverage analysis for systems of planks over convex bodies.
//!
//! A plank is the closed region between two parallel hyperplanes. Given a
//! bounded convex body and a finite list of planks, this crate decides
//! whether the planks cover the body, measures each plank against the
//! body's width in the plank's normal direction, and, when the planks can
//! be peeled off one at a time leaving convex residuals, produces a
//! machine-checkable certificate that the width ratios sum to at least one.
//!
//! All geometric predicates reduce to small linear programs, solved by a
//! built-in exact/floating simplex. Every public operation is generic over
//! the [`num::Scalar`] backend: `f64` with fixed tolerances, or
//! [`num::Quad`], exact rational arithmetic over Q(sqrt 3).

pub mod certifier;
pub mod configurations;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod num;
pub mod planks;

pub use crate::num::{Quad, Scalar, ScalarRepr};

/// Tunable thresholds and budgets shared by coverage and certification.
///
/// `tol` is the comparison tolerance for membership, emptiness and
/// certificate checks. `conv_tol` is the coarser threshold used when
/// classifying one-plank residuals as present or absent. Both default to
/// zero for exact backends.
#[derive(Clone, Debug)]
pub struct Params<S: Scalar> {
    pub tol: S,
    pub conv_tol: S,
    /// Upper bound on the number of residual cells (2^k) enumerated.
    pub cell_budget: u64,
    /// Upper bound on residual evaluations during order search.
    pub search_budget: u64,
    /// Extra sampled directions recorded in certificate width tables.
    pub sample_dirs: usize,
    /// Seed for the sampled directions.
    pub seed: u64,
}

impl<S: Scalar> Default for Params<S> {
    fn default() -> Self {
        Params {
            tol: S::default_tol(),
            conv_tol: S::default_conv_tol(),
            cell_budget: 1 << 20,
            search_budget: 1_000_000,
            sample_dirs: 32,
            seed: 7,
        }
    }
}
