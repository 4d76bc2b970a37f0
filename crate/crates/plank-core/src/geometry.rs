//! Vectors, directions, halfspace polytopes, and the LP-backed
//! support/width oracle.
//!
//! Bodies are intersections of closed halfspaces, bounded by construction.
//! Every metric query (support, width, emptiness, Chebyshev margin) is one
//! small linear program, so the exact backend yields exact answers.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::lp::{maximize, Constraint, LpResult};
use crate::num::{smax, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    pub coords: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Vector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            coords: vec![S::zero(); dim],
        }
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim());
        let mut acc = S::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc + a.clone() * b.clone();
        }
        acc
    }

    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector::new(self.coords.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Vector::new(self.coords.iter().map(|a| -a.clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// A unit vector canonicalized so the first coordinate of meaningful
/// magnitude is positive; a direction and its negation are the same
/// element of G(n,1) and normalize to the same value.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction<S> {
    unit: Vector<S>,
}

impl<S: Scalar> Direction<S> {
    /// Normalizes `v`. Exact backends require the norm to be exactly
    /// representable (e.g. integer Pythagorean vectors, or multiples of
    /// sqrt 3); otherwise `NotNormalizable` is returned.
    pub fn new(v: Vector<S>) -> Result<Self, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let n2 = v.norm2();
        let norm = n2.clone().sqrt();
        if S::EXACT && norm.clone() * norm.clone() != n2 {
            return Err(GeometryError::NotNormalizable);
        }
        let mut unit = v.scale(&(S::one() / norm));
        let flip_eps = if S::EXACT {
            S::zero()
        } else {
            S::from_f64(1e-12)
        };
        for c in &unit.coords {
            if c.clone().abs() > flip_eps {
                if *c < S::zero() {
                    unit = unit.neg();
                }
                break;
            }
        }
        Ok(Direction { unit })
    }

    pub fn unit(&self) -> &Vector<S> {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.unit.dim()
    }
}

/// The closed set {x : normal . x <= offset}.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace<S> {
    pub normal: Vector<S>,
    pub offset: S,
}

impl<S: Scalar> HalfSpace<S> {
    pub fn new(normal: Vector<S>, offset: S) -> Self {
        HalfSpace { normal, offset }
    }

    pub fn contains(&self, x: &Vector<S>, tol: &S) -> bool {
        self.normal.dot(x) <= self.offset.clone() + tol.clone()
    }
}

type ChebData<S> = (S, Vec<S>);

/// A bounded intersection of closed halfspaces.
///
/// Boundedness is established at construction (`new`) or guaranteed by the
/// deriving operation; emptiness queries are answered by a cached
/// max-margin LP whose optimum is the signed Chebyshev margin.
#[derive(Clone, Debug)]
pub struct ConvexBody<S: Scalar> {
    dim: usize,
    halfspaces: Vec<HalfSpace<S>>,
    cheb: OnceLock<ChebData<S>>,
}

impl<S: Scalar> ConvexBody<S> {
    /// Validates dimensions, nonzero normals, and boundedness (2n
    /// coordinate LPs). Empty systems are fine; unbounded ones are not.
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace<S>>) -> Result<Self, GeometryError> {
        assert!(dim >= 1, "dimension must be positive");
        for h in &halfspaces {
            if h.normal.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: h.normal.dim(),
                });
            }
            if h.normal.is_zero() {
                return Err(GeometryError::ZeroVector);
            }
        }
        let body = Self::trusted(dim, halfspaces);
        for i in 0..dim {
            for sign in [S::one(), -S::one()] {
                let mut obj = vec![S::zero(); dim];
                obj[i] = sign;
                if let LpResult::Unbounded = maximize(dim, &body.constraints(), &obj) {
                    return Err(GeometryError::Unbounded);
                }
            }
        }
        Ok(body)
    }

    /// For operations that preserve boundedness by construction.
    pub(crate) fn trusted(dim: usize, halfspaces: Vec<HalfSpace<S>>) -> Self {
        ConvexBody {
            dim,
            halfspaces,
            cheb: OnceLock::new(),
        }
    }

    /// The canonical empty body: the origin cut away by an infeasible row.
    pub fn empty(dim: usize) -> Self {
        let mut hs = Vec::with_capacity(2 * dim + 1);
        for i in 0..dim {
            hs.push(HalfSpace::new(Vector::axis(dim, i), S::zero()));
            hs.push(HalfSpace::new(Vector::axis(dim, i).neg(), S::zero()));
        }
        hs.push(HalfSpace::new(Vector::axis(dim, 0), -S::one()));
        Self::trusted(dim, hs)
    }

    pub fn from_box(lo: &[S], hi: &[S]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            hs.push(HalfSpace::new(Vector::axis(dim, i), hi[i].clone()));
            hs.push(HalfSpace::new(Vector::axis(dim, i).neg(), -lo[i].clone()));
        }
        Self::trusted(dim, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace<S>] {
        &self.halfspaces
    }

    pub(crate) fn constraints(&self) -> Vec<Constraint<S>> {
        self.halfspaces
            .iter()
            .map(|h| Constraint::new(h.normal.coords.clone(), h.offset.clone()))
            .collect()
    }

    fn cheb_data(&self) -> &ChebData<S> {
        self.cheb.get_or_init(|| {
            let weighted: Vec<(HalfSpace<S>, S)> = self
                .halfspaces
                .iter()
                .map(|h| (h.clone(), h.normal.norm2().sqrt()))
                .collect();
            max_margin(self.dim, &[], &weighted)
        })
    }

    /// Signed Chebyshev margin: positive radius when the body has
    /// interior, zero when flat, negative when infeasible. The sign is
    /// exact in the rational backend even though inexact norms may be
    /// used as weights.
    pub fn cheb_margin(&self) -> S {
        self.cheb_data().0.clone()
    }

    /// A deepest point (Chebyshev center for nonempty bodies).
    pub fn cheb_point(&self) -> Vector<S> {
        Vector::new(self.cheb_data().1.clone())
    }

    pub fn is_empty(&self) -> bool {
        self.cheb_margin() < -S::default_tol()
    }

    /// Max t with normal_j . x <= offset_j - t |normal_j| for all j;
    /// clamped at zero for flat and empty bodies.
    pub fn interior_radius(&self) -> S {
        smax(self.cheb_margin(), S::zero())
    }

    pub fn support(&self, u: &Vector<S>) -> Result<S, GeometryError> {
        assert_eq!(u.dim(), self.dim);
        assert!(!u.is_zero(), "support direction must be nonzero");
        match maximize(self.dim, &self.constraints(), &u.coords) {
            LpResult::Optimal { value, .. } => Ok(value),
            LpResult::Infeasible => Err(GeometryError::EmptyBody),
            LpResult::Unbounded => unreachable!("bodies are bounded by construction"),
        }
    }

    /// Argmax point of `u` over the body.
    pub fn support_point(&self, u: &Vector<S>) -> Result<Vector<S>, GeometryError> {
        match maximize(self.dim, &self.constraints(), &u.coords) {
            LpResult::Optimal { point, .. } => Ok(Vector::new(point)),
            LpResult::Infeasible => Err(GeometryError::EmptyBody),
            LpResult::Unbounded => unreachable!("bodies are bounded by construction"),
        }
    }

    pub fn width(&self, v: &Direction<S>) -> Result<S, GeometryError> {
        let fwd = self.support(v.unit())?;
        let bwd = self.support(&v.unit().neg())?;
        Ok(fwd + bwd)
    }

    pub fn intersect_halfspace(&self, h: HalfSpace<S>) -> Self {
        assert_eq!(h.normal.dim(), self.dim);
        assert!(!h.normal.is_zero(), "halfspace normal must be nonzero");
        let mut hs = self.halfspaces.clone();
        hs.push(h);
        Self::trusted(self.dim, hs)
    }

    /// {center + c (x - center) : x in body}; widths scale by c.
    pub fn dilate_about(&self, center: &Vector<S>, c: &S) -> Self {
        assert_eq!(center.dim(), self.dim);
        assert!(*c >= S::zero(), "dilation factor must be nonnegative");
        let one_minus = S::one() - c.clone();
        let hs = self
            .halfspaces
            .iter()
            .map(|h| {
                let shift = one_minus.clone() * h.normal.dot(center);
                HalfSpace::new(h.normal.clone(), c.clone() * h.offset.clone() + shift)
            })
            .collect();
        Self::trusted(self.dim, hs)
    }

    pub fn translate(&self, t: &Vector<S>) -> Self {
        assert_eq!(t.dim(), self.dim);
        let hs = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace::new(h.normal.clone(), h.offset.clone() + h.normal.dot(t)))
            .collect();
        Self::trusted(self.dim, hs)
    }

    /// True iff every halfspace (a, b) of `self` has support(inner, a)
    /// <= b + tol |a|.
    pub fn contains_body(&self, inner: &Self, tol: &S) -> Result<bool, GeometryError> {
        if self.is_empty() || inner.is_empty() {
            return Err(GeometryError::EmptyBody);
        }
        for h in &self.halfspaces {
            let sup = inner.support(&h.normal)?;
            let slack = if tol.is_zero() {
                h.offset.clone()
            } else {
                h.offset.clone() + tol.clone() * h.normal.norm2().sqrt()
            };
            if sup > slack {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_point(&self, x: &Vector<S>, tol: &S) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }

    /// Componentwise support bounds (lo, hi) of the body.
    pub fn bounding_box(&self) -> Result<(Vec<S>, Vec<S>), GeometryError> {
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let e = Vector::axis(self.dim, i);
            hi.push(self.support(&e)?);
            lo.push(-self.support(&e.neg())?);
        }
        Ok((lo, hi))
    }

    /// Vertex cycle of a 2-D polygon by pairwise halfspace intersection
    /// and feasibility filtering, counterclockwise, starting from the
    /// lexicographically smallest vertex. Flat bodies yield their one or
    /// two extreme points.
    pub fn vertices_2d(&self) -> Result<Vec<Vector<S>>, GeometryError> {
        if self.dim != 2 {
            return Err(GeometryError::NotPlanar(self.dim));
        }
        if self.is_empty() {
            return Err(GeometryError::EmptyBody);
        }
        let tol = S::default_tol();
        let mut verts: Vec<Vector<S>> = Vec::new();
        let hs = &self.halfspaces;
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                let (a, b) = (&hs[i].normal, &hs[j].normal);
                let det = a.coords[0].clone() * b.coords[1].clone()
                    - a.coords[1].clone() * b.coords[0].clone();
                let scale = S::one()
                    + (a.coords[0].clone() * b.coords[1].clone()).abs()
                    + (a.coords[1].clone() * b.coords[0].clone()).abs();
                let par_eps = if S::EXACT {
                    S::zero()
                } else {
                    S::from_f64(1e-12) * scale
                };
                if det.clone().abs() <= par_eps {
                    continue;
                }
                let (c1, c2) = (hs[i].offset.clone(), hs[j].offset.clone());
                let x = (c1.clone() * b.coords[1].clone() - c2.clone() * a.coords[1].clone())
                    / det.clone();
                let y = (a.coords[0].clone() * c2 - b.coords[0].clone() * c1) / det;
                let p = Vector::new(vec![x, y]);
                let feasible = hs.iter().all(|h| {
                    let feas = tol.clone() * (S::one() + h.offset.clone().abs());
                    h.normal.dot(&p) <= h.offset.clone() + feas
                });
                if !feasible {
                    continue;
                }
                let eq_eps = if S::EXACT { S::zero() } else { S::from_f64(1e-9) };
                let dup = verts.iter().any(|q| {
                    (p.coords[0].clone() - q.coords[0].clone()).abs() <= eq_eps
                        && (p.coords[1].clone() - q.coords[1].clone()).abs() <= eq_eps
                });
                if !dup {
                    verts.push(p);
                }
            }
        }
        if verts.len() <= 2 {
            verts.sort_by(|p, q| lex_cmp(p, q));
            return Ok(verts);
        }
        let inv = S::one() / S::from_int(verts.len() as i64);
        let mut centroid = Vector::zero(2);
        for v in &verts {
            centroid = centroid.add(v);
        }
        let centroid = centroid.scale(&inv);
        verts.sort_by(|p, q| ccw_cmp(&p.sub(&centroid), &q.sub(&centroid), p, q));
        let start = (0..verts.len())
            .min_by(|&i, &j| lex_cmp(&verts[i], &verts[j]))
            .unwrap();
        verts.rotate_left(start);
        Ok(verts)
    }
}

fn lex_cmp<S: Scalar>(p: &Vector<S>, q: &Vector<S>) -> std::cmp::Ordering {
    for (a, b) in p.coords.iter().zip(&q.coords) {
        match a.partial_cmp(b) {
            Some(std::cmp::Ordering::Equal) => continue,
            Some(ord) => return ord,
            None => panic!("unordered scalars"),
        }
    }
    std::cmp::Ordering::Equal
}

/// Angular order counterclockwise from the positive x-axis, with a
/// lexicographic tie-break on the original points for totality.
fn ccw_cmp<S: Scalar>(
    u: &Vector<S>,
    w: &Vector<S>,
    pu: &Vector<S>,
    pw: &Vector<S>,
) -> std::cmp::Ordering {
    let class = |v: &Vector<S>| {
        let (x, y) = (&v.coords[0], &v.coords[1]);
        if *y > S::zero() || (y.is_zero() && *x > S::zero()) {
            0u8
        } else {
            1u8
        }
    };
    let (cu, cw) = (class(u), class(w));
    if cu != cw {
        return cu.cmp(&cw);
    }
    let cross = u.coords[0].clone() * w.coords[1].clone()
        - u.coords[1].clone() * w.coords[0].clone();
    if cross > S::zero() {
        std::cmp::Ordering::Less
    } else if cross < S::zero() {
        std::cmp::Ordering::Greater
    } else {
        lex_cmp(pu, pw)
    }
}

/// Solves max t s.t. plain rows hold and each weighted row (h, w)
/// satisfies h.normal . x + w t <= h.offset. Weights must be positive;
/// the optimum's sign then decides emptiness questions exactly even when
/// the weights themselves are approximate.
pub(crate) fn max_margin<S: Scalar>(
    dim: usize,
    plain: &[HalfSpace<S>],
    weighted: &[(HalfSpace<S>, S)],
) -> (S, Vec<S>) {
    assert!(!weighted.is_empty(), "margin LP needs a weighted row");
    let mut cons = Vec::with_capacity(plain.len() + weighted.len());
    for h in plain {
        let mut row = h.normal.coords.clone();
        row.push(S::zero());
        cons.push(Constraint::new(row, h.offset.clone()));
    }
    for (h, w) in weighted {
        assert!(*w > S::zero(), "margin weights must be positive");
        let mut row = h.normal.coords.clone();
        row.push(w.clone());
        cons.push(Constraint::new(row, h.offset.clone()));
    }
    let mut obj = vec![S::zero(); dim + 1];
    obj[dim] = S::one();
    match maximize(dim + 1, &cons, &obj) {
        LpResult::Optimal { value, point } => {
            let x = point[..dim].to_vec();
            (value, x)
        }
        LpResult::Infeasible => unreachable!("margin LPs are always feasible"),
        LpResult::Unbounded => unreachable!("margin LPs over bounded systems are bounded"),
    }
}

/// Deterministic pseudo-random unit directions, exactly unit in every
/// backend: a coordinate axis spun by random rational Givens rotations
/// (Pythagorean sine/cosine pairs preserve the norm exactly).
pub fn sample_directions<S: Scalar>(dim: usize, count: usize, seed: u64) -> Vec<Direction<S>> {
    assert!(dim >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let axis = rng.gen_range(0..dim);
        let mut v: Vector<S> = Vector::axis(dim, axis);
        if dim > 1 {
            for _ in 0..2 * dim {
                let i = rng.gen_range(0..dim);
                let mut j = rng.gen_range(0..dim - 1);
                if j >= i {
                    j += 1;
                }
                let m: i64 = rng.gen_range(2..=12);
                let n: i64 = rng.gen_range(1..m);
                let d = m * m + n * n;
                let c = S::from_ratio(m * m - n * n, d);
                let s = S::from_ratio(2 * m * n, d);
                let vi = v.coords[i].clone();
                let vj = v.coords[j].clone();
                v.coords[i] = c.clone() * vi.clone() - s.clone() * vj.clone();
                v.coords[j] = s * vi + c * vj;
            }
        }
        out.push(Direction::new(v).expect("rotations preserve the unit norm"));
    }
    out
}
