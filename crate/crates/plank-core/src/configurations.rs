//! Canned and randomized scenes: the Hunter triangle, regular polygons,
//! telescoping slab partitions, and a seeded generator of peelable covers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::geometry::{sample_directions, ConvexBody, Direction, HalfSpace, Vector};
use crate::num::Scalar;
use crate::planks::{plank_from_centerline, Plank};

/// A body together with an ordered list of planks meant to cover it.
#[derive(Clone, Debug)]
pub struct Scene<S: Scalar> {
    pub body: ConvexBody<S>,
    pub planks: Vec<Plank<S>>,
    pub label: String,
}

/// Unit equilateral triangle with a width-1/3 plank through each vertex
/// along its angle bisector. The planks cover the triangle, their ratios sum
/// to exactly one, and no peeling order exists.
pub fn hunter_triangle<S: Scalar>() -> Scene<S> {
    let s3 = S::sqrt3();
    let two = S::from_int(2);
    let body = ConvexBody::new(
        2,
        vec![
            HalfSpace::new(Vector::new(vec![S::zero(), -S::one()]), S::zero()),
            HalfSpace::new(Vector::new(vec![-s3.clone(), S::one()]), S::zero()),
            HalfSpace::new(Vector::new(vec![s3.clone(), S::one()]), s3.clone()),
        ],
    )
    .expect("the triangle is a bounded body");
    let w = S::from_ratio(1, 3);
    // Each bisector direction has norm 2, so it normalizes exactly.
    let corners = [
        (
            Vector::new(vec![S::zero(), S::zero()]),
            Vector::new(vec![s3.clone(), S::one()]),
        ),
        (
            Vector::new(vec![S::one(), S::zero()]),
            Vector::new(vec![-s3.clone(), S::one()]),
        ),
        (
            Vector::new(vec![S::one() / two.clone(), s3 / two]),
            Vector::new(vec![S::zero(), -S::one()]),
        ),
    ];
    let planks = corners
        .into_iter()
        .map(|(vertex, bisector)| {
            let dir = Direction::new(bisector).expect("bisector norms are representable");
            plank_from_centerline(&vertex, &dir, w.clone()).expect("planar scene")
        })
        .collect();
    Scene {
        body,
        planks,
        label: "hunter".to_string(),
    }
}

/// H-representation of the regular n-gon centered at the origin with the
/// given circumradius; vertices sit at angles 2*pi*i/n. Normals come from
/// float trigonometry, so the exact backend carries dyadic approximations.
pub fn regular_polygon<S: Scalar>(n: usize, circumradius: S) -> ConvexBody<S> {
    assert!(n >= 3, "a polygon needs at least three vertices");
    assert!(circumradius > S::zero(), "circumradius must be positive");
    let apothem = S::from_f64((std::f64::consts::PI / n as f64).cos());
    let halfspaces = (0..n)
        .map(|i| {
            let theta = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
            let normal = Vector::new(vec![S::from_f64(theta.cos()), S::from_f64(theta.sin())]);
            HalfSpace::new(normal, circumradius.clone() * apothem.clone())
        })
        .collect();
    ConvexBody::new(2, halfspaces).expect("regular polygons are bounded")
}

/// Splits the minimal covering plank of the body along `v` at the given
/// increasing fractions, yielding k contiguous planks. Their ratios
/// telescope to exactly one and any sweep order peels.
pub fn slab_partition<S: Scalar>(
    body: &ConvexBody<S>,
    v: &Direction<S>,
    k: usize,
    cuts: &[S],
) -> Result<Vec<Plank<S>>, GeometryError> {
    assert!(k >= 1, "need at least one slab");
    assert_eq!(cuts.len() + 1, k, "cuts must split into exactly k slabs");
    let hi = body.support(v.unit())?;
    let lo = -body.support(&v.unit().neg())?;
    let span = hi.clone() - lo.clone();
    assert!(span > S::zero(), "body is flat along the slab direction");
    let mut bounds = Vec::with_capacity(k + 1);
    bounds.push(lo.clone());
    let mut prev = S::zero();
    for c in cuts {
        assert!(
            *c > prev && *c < S::one(),
            "cuts must increase strictly within (0, 1)"
        );
        prev = c.clone();
        bounds.push(lo.clone() + c.clone() * span.clone());
    }
    bounds.push(hi);
    bounds
        .windows(2)
        .map(|w| Plank::new(v.clone(), w[0].clone(), w[1].clone()))
        .collect()
}

/// Deterministic-from-seed scene: a box trimmed by random halfspaces, then k
/// planks sliced off one side at a time so the generation order always
/// peels. Every random draw is an integer or a bool, so the construction
/// follows the same path in both backends.
pub fn random_peelable_scene<S: Scalar>(seed: u64, dim: usize, k: usize) -> Scene<S> {
    assert!(dim == 2 || dim == 3, "the generator covers dim 2 and 3");
    assert!(k >= 1, "need at least one plank");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body = random_body::<S>(&mut rng, dim);
    let dirs = sample_directions::<S>(dim, k, rng.gen());
    let mut planks = Vec::with_capacity(k);
    let mut current = body.clone();
    for (i, dir) in dirs.iter().enumerate() {
        let hi = current.support(dir.unit()).expect("residuals stay solid");
        let lo = -current
            .support(&dir.unit().neg())
            .expect("residuals stay solid");
        let w = hi.clone() - lo.clone();
        // Outward padding keeps the far side of each plank clear of the
        // residual, which is what makes the slice one-sided.
        let pad = S::from_ratio(rng.gen_range(5i64..=20), 100) * w.clone();
        if i + 1 == k {
            let pad2 = S::from_ratio(rng.gen_range(5i64..=20), 100) * w.clone();
            planks.push(Plank::new(dir.clone(), lo - pad, hi + pad2).expect("ordered interval"));
        } else {
            let frac = S::from_ratio(rng.gen_range(15i64..=45), 100);
            if rng.gen_bool(0.5) {
                let cut = lo.clone() + frac * w;
                planks
                    .push(Plank::new(dir.clone(), lo - pad, cut.clone()).expect("ordered interval"));
                current = current.intersect_halfspace(HalfSpace::new(dir.unit().neg(), -cut));
            } else {
                let cut = hi.clone() - frac * w;
                planks
                    .push(Plank::new(dir.clone(), cut.clone(), hi + pad).expect("ordered interval"));
                current = current.intersect_halfspace(HalfSpace::new(dir.unit().clone(), cut));
            }
        }
    }
    Scene {
        body,
        planks,
        label: format!("random-{seed}-d{dim}-k{k}"),
    }
}

/// Box [-1, 1]^dim trimmed by random halfspaces whose offsets keep the ball
/// of radius 0.3 around the origin, so the interior radius stays above 5% of
/// the box size without a rejection loop.
fn random_body<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> ConvexBody<S> {
    let lo: Vec<S> = (0..dim).map(|_| -S::one()).collect();
    let hi: Vec<S> = (0..dim).map(|_| S::one()).collect();
    let mut body = ConvexBody::from_box(&lo, &hi);
    let cuts = rng.gen_range(dim..=2 * dim);
    let dirs = sample_directions::<S>(dim, cuts, rng.gen());
    for d in &dirs {
        let offset = S::from_ratio(rng.gen_range(30i64..=90), 100);
        body = body.intersect_halfspace(HalfSpace::new(d.unit().clone(), offset));
    }
    debug_assert!(body.interior_radius() >= S::from_ratio(1, 10));
    body
}
