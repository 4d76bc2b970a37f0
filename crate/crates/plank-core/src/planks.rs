//! Planks: closed slabs between parallel hyperplanes, their widths,
//! membership, complements, and width ratios against a body.

use std::fmt;

use crate::error::GeometryError;
use crate::geometry::{ConvexBody, Direction, HalfSpace, Vector};
use crate::num::Scalar;

/// The closed set {x : lo <= normal . x <= hi} against a unit normal.
///
/// The normal is canonicalized at construction (first meaningful
/// coordinate positive), so a plank and its mirror description compare
/// equal and serialize identically.
#[derive(Clone, Debug, PartialEq)]
pub struct Plank<S: Scalar> {
    normal: Direction<S>,
    lo: S,
    hi: S,
}

impl<S: Scalar> Plank<S> {
    pub fn new(normal: Direction<S>, lo: S, hi: S) -> Result<Self, GeometryError> {
        if lo > hi {
            return Err(GeometryError::InvalidPlank);
        }
        Ok(Plank { normal, lo, hi })
    }

    /// Builds a plank from an arbitrary nonzero normal and offsets
    /// measured against it, normalizing and canonicalizing both.
    pub fn from_raw(normal: Vector<S>, lo: S, hi: S) -> Result<Self, GeometryError> {
        if normal.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let n2 = normal.norm2();
        let scale = n2.clone().sqrt();
        if S::EXACT && scale.clone() * scale.clone() != n2 {
            return Err(GeometryError::NotNormalizable);
        }
        let lo = lo / scale.clone();
        let hi = hi / scale;
        let dir = Direction::new(normal.clone())?;
        if dir.unit().dot(&normal) < S::zero() {
            Plank::new(dir, -hi, -lo)
        } else {
            Plank::new(dir, lo, hi)
        }
    }

    pub fn direction(&self) -> &Direction<S> {
        &self.normal
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn width(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn contains(&self, x: &Vector<S>, tol: &S) -> bool {
        let t = self.normal.unit().dot(x);
        self.lo.clone() - tol.clone() <= t && t <= self.hi.clone() + tol.clone()
    }

    /// The plank's own two halfspaces: normal . x <= hi and >= lo.
    pub fn as_halfspaces(&self) -> (HalfSpace<S>, HalfSpace<S>) {
        (
            HalfSpace::new(self.normal.unit().clone(), self.hi.clone()),
            HalfSpace::new(self.normal.unit().neg(), -self.lo.clone()),
        )
    }

    /// The closed halfspace on the low side: {normal . x <= lo}.
    pub fn below_halfspace(&self) -> HalfSpace<S> {
        HalfSpace::new(self.normal.unit().clone(), self.lo.clone())
    }

    /// The closed halfspace on the high side: {normal . x >= hi}.
    pub fn above_halfspace(&self) -> HalfSpace<S> {
        HalfSpace::new(self.normal.unit().neg(), -self.hi.clone())
    }

    pub fn as_body(&self, bounding: &ConvexBody<S>) -> ConvexBody<S> {
        let (upper, lower) = self.as_halfspaces();
        bounding.intersect_halfspace(upper).intersect_halfspace(lower)
    }
}

/// A width ratio w_i / w_{v_i}(C), infinite when the denominator
/// vanishes.
#[derive(Clone, Debug, PartialEq)]
pub enum BangRatio<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> BangRatio<S> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, BangRatio::Infinite)
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            BangRatio::Finite(v) => Some(v),
            BangRatio::Infinite => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (BangRatio::Finite(a), BangRatio::Finite(b)) => {
                BangRatio::Finite(a.clone() + b.clone())
            }
            _ => BangRatio::Infinite,
        }
    }
}

impl<S: Scalar> fmt::Display for BangRatio<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BangRatio::Finite(v) => write!(f, "{v}"),
            BangRatio::Infinite => write!(f, "inf"),
        }
    }
}

/// The plank of width `w` in the plane whose center line runs through
/// `point` along `line_dir`.
pub fn plank_from_centerline<S: Scalar>(
    point: &Vector<S>,
    line_dir: &Direction<S>,
    w: S,
) -> Result<Plank<S>, GeometryError> {
    if line_dir.dim() != 2 || point.dim() != 2 {
        return Err(GeometryError::NotPlanar(line_dir.dim()));
    }
    assert!(w > S::zero(), "plank width must be positive");
    let u = line_dir.unit();
    let perp = Vector::new(vec![-u.coords[1].clone(), u.coords[0].clone()]);
    let normal = Direction::new(perp)?;
    let mid = normal.unit().dot(point);
    let half = w / S::from_int(2);
    Plank::new(normal, mid.clone() - half.clone(), mid + half)
}

/// The narrowest plank in direction `v` covering the body.
pub fn min_covering_plank<S: Scalar>(
    body: &ConvexBody<S>,
    v: &Direction<S>,
) -> Result<Plank<S>, GeometryError> {
    let hi = body.support(v.unit())?;
    let lo = -body.support(&v.unit().neg())?;
    Plank::new(v.clone(), lo, hi)
}

/// plank width / body width in the plank's direction, infinite when the
/// body is flat in that direction.
pub fn bang_ratio<S: Scalar>(
    p: &Plank<S>,
    body: &ConvexBody<S>,
) -> Result<BangRatio<S>, GeometryError> {
    let denom = body.width(p.direction())?;
    if denom <= S::default_tol() {
        return Ok(BangRatio::Infinite);
    }
    Ok(BangRatio::Finite(p.width() / denom))
}
