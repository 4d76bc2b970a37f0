//! Residual-cell enumeration and coverage decisions.
//!
//! The residual of a body minus closed planks decomposes into sign-vector
//! cells (below or above each plank). A cell is genuinely present exactly
//! when its max-margin LP value is positive: the margin measures how far
//! some body point clears every chosen strict complement inequality, so
//! boundary-only slivers (which the closed planks do cover) count as
//! empty.

use crate::error::{CoverageError, GeometryError};
use crate::geometry::{max_margin, ConvexBody, HalfSpace, Vector};
use crate::num::{smax, Scalar};
use crate::planks::Plank;
use crate::Params;

/// Which side of a plank a cell lies on. `Inside` never appears in full
/// decompositions; it marks planks without a constraint in partial ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlankSide {
    Below,
    Inside,
    Above,
}

#[derive(Clone, Debug)]
pub struct ResidualCell<S: Scalar> {
    pub signs: Vec<PlankSide>,
    pub closure: ConvexBody<S>,
    /// Max margin over body points against every strict constraint;
    /// clamped at zero. The open cell is nonempty iff this is positive.
    pub strict_radius: S,
    /// A margin-maximizing point, present when the radius is positive.
    pub witness: Option<Vector<S>>,
}

fn strict_rows<S: Scalar>(planks: &[Plank<S>], signs: &[PlankSide]) -> Vec<(HalfSpace<S>, S)> {
    planks
        .iter()
        .zip(signs)
        .filter_map(|(p, side)| match side {
            PlankSide::Below => Some((p.below_halfspace(), S::one())),
            PlankSide::Above => Some((p.above_halfspace(), S::one())),
            PlankSide::Inside => None,
        })
        .collect()
}

/// Enumerates all 2^k sign-vector cells of body minus planks, depth first
/// in plank order with below before above. Partial closures already found
/// empty prune the LP work (not the cells) beneath them.
pub fn residual_cells<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Result<Vec<ResidualCell<S>>, CoverageError> {
    if body.is_empty() {
        return Err(GeometryError::EmptyBody.into());
    }
    let k = planks.len();
    if k >= 63 || (1u64 << k) > params.cell_budget {
        return Err(CoverageError::CellBudgetExceeded {
            planks: k,
            budget: params.cell_budget,
        });
    }
    for p in planks {
        assert_eq!(p.dim(), body.dim(), "plank dimension mismatch");
    }
    let mut out = Vec::with_capacity(1 << k);
    let mut signs: Vec<PlankSide> = Vec::with_capacity(k);
    descend(body, planks, params, &mut signs, body.clone(), false, &mut out);
    Ok(out)
}

fn descend<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
    signs: &mut Vec<PlankSide>,
    partial: ConvexBody<S>,
    known_empty: bool,
    out: &mut Vec<ResidualCell<S>>,
) {
    let depth = signs.len();
    if depth == planks.len() {
        let (radius, witness) = if known_empty {
            (S::zero(), None)
        } else if signs.is_empty() {
            // No strict constraints: the cell is the body itself and the
            // margin is unbounded; report a unit stand-in.
            (S::one(), Some(body.cheb_point()))
        } else {
            let (t, x) = max_margin(body.dim(), body.halfspaces(), &strict_rows(planks, signs));
            if t > params.tol {
                (t, Some(Vector::new(x)))
            } else {
                (smax(t, S::zero()), None)
            }
        };
        out.push(ResidualCell {
            signs: signs.clone(),
            closure: partial,
            strict_radius: radius,
            witness,
        });
        return;
    }
    let plank = &planks[depth];
    for side in [PlankSide::Below, PlankSide::Above] {
        let half = match side {
            PlankSide::Below => plank.below_halfspace(),
            PlankSide::Above => plank.above_halfspace(),
            PlankSide::Inside => unreachable!(),
        };
        let next = partial.intersect_halfspace(half);
        let empty = known_empty || next.is_empty();
        signs.push(side);
        descend(body, planks, params, signs, next, empty, out);
        signs.pop();
    }
}

/// True iff no residual cell has positive strict margin, i.e. the closed
/// planks cover the body.
pub fn covers<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Result<bool, CoverageError> {
    let cells = residual_cells(body, planks, params)?;
    Ok(cells.iter().all(|c| c.strict_radius <= params.tol))
}

/// Outcome of removing one plank from a body.
#[derive(Clone, Debug)]
pub enum Residual<S: Scalar> {
    /// The plank swallows the body (up to boundary slivers).
    Empty,
    /// The residual is convex; its closure is returned.
    Body(ConvexBody<S>),
    /// Both sides of the plank retain interior: not convex.
    NotConvex,
}

/// Splits the body by one plank and classifies the outcome. A side counts
/// as present when its strict margin exceeds `params.conv_tol`, a
/// deliberately coarser threshold than the LP tolerance.
pub fn convex_residual<S: Scalar>(
    body: &ConvexBody<S>,
    p: &Plank<S>,
    params: &Params<S>,
) -> Result<Residual<S>, GeometryError> {
    if body.is_empty() {
        return Err(GeometryError::EmptyBody);
    }
    let below = p.below_halfspace();
    let above = p.above_halfspace();
    let (t_below, _) = max_margin(body.dim(), body.halfspaces(), &[(below.clone(), S::one())]);
    let (t_above, _) = max_margin(body.dim(), body.halfspaces(), &[(above.clone(), S::one())]);
    let present_below = t_below > params.conv_tol;
    let present_above = t_above > params.conv_tol;
    match (present_below, present_above) {
        (true, true) => Ok(Residual::NotConvex),
        (false, false) => Ok(Residual::Empty),
        (true, false) => Ok(Residual::Body(body.intersect_halfspace(below))),
        (false, true) => Ok(Residual::Body(body.intersect_halfspace(above))),
    }
}

/// Result of peeling planks in order.
#[derive(Clone, Debug)]
pub enum SequenceResult<S: Scalar> {
    /// Closures X_1, ..., X_k; once a residual empties, the rest are the
    /// canonical empty body.
    Peeled(Vec<ConvexBody<S>>),
    /// The residual at this 0-based step is not convex.
    NotConvexAt(usize),
}

pub fn residual_sequence<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Result<SequenceResult<S>, GeometryError> {
    if body.is_empty() {
        return Err(GeometryError::EmptyBody);
    }
    let mut current = body.clone();
    let mut emptied = false;
    let mut closures = Vec::with_capacity(planks.len());
    for (m, p) in planks.iter().enumerate() {
        if emptied {
            closures.push(ConvexBody::empty(body.dim()));
            continue;
        }
        match convex_residual(&current, p, params)? {
            Residual::NotConvex => return Ok(SequenceResult::NotConvexAt(m)),
            Residual::Empty => {
                emptied = true;
                closures.push(ConvexBody::empty(body.dim()));
            }
            Residual::Body(x) => {
                current = x.clone();
                closures.push(x);
            }
        }
    }
    Ok(SequenceResult::Peeled(closures))
}
