//! Randomized properties: width facts, oracle agreement, cell partitions,
//! ratio invariances, and the peelable-scene bound.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plank_core::certifier::{bang_sum, certify, verify_certificate, WidthKey};
use plank_core::configurations::{hunter_triangle, random_peelable_scene, slab_partition};
use plank_core::coverage::{
    convex_residual, covers, residual_cells, residual_sequence, PlankSide, Residual,
    SequenceResult,
};
use plank_core::geometry::{sample_directions, ConvexBody, Direction, HalfSpace, Vector};
use plank_core::planks::{bang_ratio, min_covering_plank, plank_from_centerline, BangRatio, Plank};
use plank_core::{Params, Quad, Scalar};

fn fuzz_body(seed: u64) -> ConvexBody<f64> {
    random_peelable_scene::<f64>(seed, 2, 1).body
}

fn quick_params() -> Params<f64> {
    Params {
        sample_dirs: 8,
        ..Params::default()
    }
}

fn rational_vector(ints: &[i64]) -> Vector<f64> {
    Vector::new(ints.iter().map(|&i| i as f64 / 8.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Translation leaves widths alone, dilation scales them by c, cutting
    // can only shrink them, and raw width is symmetric under sign flips.
    #[test]
    fn width_facts_hold(seed in any::<u64>(), dseed in any::<u64>(),
                        t in prop::array::uniform2(-12i64..=12),
                        c10 in 0i64..=30) {
        let body = fuzz_body(seed);
        let shift = rational_vector(&t);
        let c = c10 as f64 / 10.0;
        let center = Vector::new(vec![0.25, -0.5]);
        let moved = body.translate(&shift);
        let scaled = body.dilate_about(&center, &c);
        let cut = body.intersect_halfspace(
            HalfSpace::new(Vector::new(vec![3.0, -1.0]), 0.4),
        );
        let cut_empty = cut.is_empty();
        for v in sample_directions::<f64>(2, 5, dseed) {
            let w = body.width(&v).unwrap();
            prop_assert!((moved.width(&v).unwrap() - w).abs() <= 1e-12);
            prop_assert!((scaled.width(&v).unwrap() - c * w).abs() <= 1e-12 * (1.0 + c));
            if !cut_empty {
                prop_assert!(cut.width(&v).unwrap() <= w + 1e-12);
            }
            let raw = v.unit();
            let fwd = body.support(raw).unwrap() + body.support(&raw.neg()).unwrap();
            let bwd = body.support(&raw.neg()).unwrap() + body.support(raw).unwrap();
            prop_assert!((fwd - bwd).abs() <= 1e-12);
        }
        if !cut_empty {
            prop_assert!(body.contains_body(&cut, &1e-9).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // A direction and its negation canonicalize identically, and a plank fed
    // with a flipped normal lands on the same slab.
    #[test]
    fn directions_and_planks_canonicalize(raw in prop::array::uniform2(-9i64..=9),
                                          lo10 in -20i64..=10) {
        prop_assume!(raw != [0, 0]);
        let v = rational_vector(&raw);
        let a = Direction::<f64>::new(v.clone()).unwrap();
        let b = Direction::<f64>::new(v.neg()).unwrap();
        prop_assert_eq!(&a, &b);

        let lo = lo10 as f64 / 10.0;
        let hi = lo + 0.7;
        let p = Plank::from_raw(v.clone(), lo, hi).unwrap();
        let q = Plank::from_raw(v.neg(), -hi, -lo).unwrap();
        prop_assert!((p.lo() - q.lo()).abs() <= 1e-12 && (p.hi() - q.hi()).abs() <= 1e-12);
        prop_assert_eq!(p.direction(), q.direction());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // In the plane the LP support values must agree with the brute-force
    // projection of the vertex list.
    #[test]
    fn lp_width_matches_vertex_projection(seed in any::<u64>(), dseed in any::<u64>()) {
        let body = fuzz_body(seed);
        let verts = body.vertices_2d().unwrap();
        prop_assert!(verts.len() >= 3);
        for v in sample_directions::<f64>(2, 4, dseed) {
            let w = body.width(&v).unwrap();
            let dots: Vec<f64> = verts.iter().map(|p| p.dot(v.unit())).collect();
            let spread = dots.iter().cloned().fold(f64::MIN, f64::max)
                - dots.iter().cloned().fold(f64::MAX, f64::min);
            prop_assert!((w - spread).abs() <= 1e-9, "lp {w} vs hull {spread}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn redundant_halfspaces_change_no_width(seed in any::<u64>(), dseed in any::<u64>()) {
        let body = fuzz_body(seed);
        let dirs = sample_directions::<f64>(2, 6, dseed);
        let outer = body.support(dirs[0].unit()).unwrap() + 0.5;
        let padded = body.intersect_halfspace(HalfSpace::new(dirs[0].unit().clone(), outer));
        for v in &dirs {
            prop_assert!((padded.width(v).unwrap() - body.width(v).unwrap()).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // Points of the body that no plank covers land in exactly one strict
    // cell; covered points are strictly inside none.
    #[test]
    fn cells_partition_the_uncovered_part(seed in any::<u64>(), k in 1usize..=3) {
        let scene = random_peelable_scene::<f64>(seed, 2, k);
        let cells = residual_cells(&scene.body, &scene.planks, &quick_params()).unwrap();
        let (blo, bhi) = scene.body.bounding_box().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..20 {
            let x = Vector::new(
                (0..2).map(|j| rng.gen_range(blo[j]..=bhi[j])).collect::<Vec<f64>>(),
            );
            if !scene.body.contains_point(&x, &0.0) {
                continue;
            }
            let sigma: Vec<PlankSide> = scene
                .planks
                .iter()
                .map(|p| {
                    let t = p.direction().unit().dot(&x);
                    if t < *p.lo() {
                        PlankSide::Below
                    } else if t > *p.hi() {
                        PlankSide::Above
                    } else {
                        PlankSide::Inside
                    }
                })
                .collect();
            if sigma.contains(&PlankSide::Inside) {
                for cell in &cells {
                    let strictly_inside =
                        scene.planks.iter().zip(&cell.signs).all(|(p, side)| {
                            let t = p.direction().unit().dot(&x);
                            match side {
                                PlankSide::Below => t < p.lo() - 1e-9,
                                PlankSide::Above => t > p.hi() + 1e-9,
                                PlankSide::Inside => false,
                            }
                        });
                    prop_assert!(!strictly_inside);
                }
            } else {
                let hits: Vec<_> = cells.iter().filter(|c| c.signs == sigma).collect();
                prop_assert_eq!(hits.len(), 1);
                prop_assert!(hits[0].closure.contains_point(&x, &1e-9));
            }
        }
    }

    // Shrinking the only plank of a covered scene uncovers it, and the
    // reported worst cell carries a genuine witness point.
    #[test]
    fn uncovered_scenes_produce_witnesses(seed in any::<u64>()) {
        let scene = random_peelable_scene::<f64>(seed, 2, 1);
        let params = quick_params();
        prop_assert!(covers(&scene.body, &scene.planks, &params).unwrap());
        let p = &scene.planks[0];
        let w = p.width();
        let shrunk = Plank::new(
            p.direction().clone(),
            p.lo() + 0.35 * w,
            p.hi() - 0.35 * w,
        )
        .unwrap();
        let planks = vec![shrunk];
        prop_assert!(!covers(&scene.body, &planks, &params).unwrap());
        let cells = residual_cells(&scene.body, &planks, &params).unwrap();
        let worst = cells
            .iter()
            .max_by(|a, b| a.strict_radius.partial_cmp(&b.strict_radius).unwrap())
            .unwrap();
        prop_assert!(worst.strict_radius > params.tol);
        let x = worst.witness.as_ref().unwrap();
        prop_assert!(scene.body.contains_point(x, &1e-9));
        for p in &planks {
            prop_assert!(!p.contains(x, &1e-9));
        }
    }

    // A one-sided peel means the plank alone does not cover, the residual
    // fits inside the body, and no width grows.
    #[test]
    fn convex_residuals_shrink(seed in any::<u64>(), dseed in any::<u64>()) {
        let scene = random_peelable_scene::<f64>(seed, 2, 2);
        let params = quick_params();
        let p = &scene.planks[0];
        let Residual::Body(x) = convex_residual(&scene.body, p, &params).unwrap() else {
            return Err(TestCaseError::fail("generator always peels one-sided"));
        };
        prop_assert!(!covers(&scene.body, &scene.planks[..1], &params).unwrap());
        prop_assert!(scene.body.contains_body(&x, &1e-9).unwrap());
        for v in sample_directions::<f64>(2, 5, dseed) {
            prop_assert!(x.width(&v).unwrap() <= scene.body.width(&v).unwrap() + 1e-12);
        }
    }

    #[test]
    fn extra_planks_never_uncover(seed in any::<u64>(), k in 1usize..=3, dseed in any::<u64>()) {
        let scene = random_peelable_scene::<f64>(seed, 2, k);
        let params = quick_params();
        prop_assert!(covers(&scene.body, &scene.planks, &params).unwrap());
        let dir = sample_directions::<f64>(2, 1, dseed).pop().unwrap();
        let lo = -scene.body.support(&dir.unit().neg()).unwrap();
        let extra = Plank::new(dir, lo - 0.1, lo + 0.2).unwrap();
        let mut planks = scene.planks.clone();
        planks.push(extra);
        prop_assert!(covers(&scene.body, &planks, &params).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Ratios ignore translations, scale as 1/c under body dilation, and are
    // invariant under joint dilation of body and plank.
    #[test]
    fn bang_ratios_are_affine_invariant(seed in any::<u64>(), dseed in any::<u64>(),
                                        t in prop::array::uniform2(-12i64..=12),
                                        c10 in prop::sample::select(vec![5i64, 15, 20, 30])) {
        let body = fuzz_body(seed);
        let dir = sample_directions::<f64>(2, 1, dseed).pop().unwrap();
        let cover = min_covering_plank(&body, &dir).unwrap();
        let w = cover.width();
        let plank = Plank::new(dir, *cover.lo(), cover.lo() + 0.6 * w).unwrap();
        let r = match bang_ratio(&plank, &body).unwrap() {
            BangRatio::Finite(r) => r,
            BangRatio::Infinite => return Err(TestCaseError::fail("solid body")),
        };

        let moved = body.translate(&rational_vector(&t));
        let BangRatio::Finite(r_moved) = bang_ratio(&plank, &moved).unwrap() else {
            return Err(TestCaseError::fail("translation keeps widths"));
        };
        prop_assert!((r_moved - r).abs() <= 1e-9 * (1.0 + r));

        let c = c10 as f64 / 10.0;
        let center = Vector::new(vec![0.5, -0.25]);
        let scaled = body.dilate_about(&center, &c);
        let BangRatio::Finite(r_scaled) = bang_ratio(&plank, &scaled).unwrap() else {
            return Err(TestCaseError::fail("positive dilation keeps widths"));
        };
        prop_assert!((r_scaled - r / c).abs() <= 1e-9 * (1.0 + r / c));

        let m = plank.direction().unit().dot(&center);
        let joint = Plank::new(
            plank.direction().clone(),
            c * plank.lo() + (1.0 - c) * m,
            c * plank.hi() + (1.0 - c) * m,
        )
        .unwrap();
        let BangRatio::Finite(r_joint) = bang_ratio(&joint, &scaled).unwrap() else {
            return Err(TestCaseError::fail("joint dilation keeps widths"));
        };
        prop_assert!((r_joint - r).abs() <= 1e-9 * (1.0 + r));
    }

    // A plank that misses or merely grazes the body peels without shrinking
    // anything: every width survives.
    #[test]
    fn grazing_peels_preserve_all_widths(seed in any::<u64>(), dseed in any::<u64>(),
                                         gap10 in 0i64..=2) {
        let body = fuzz_body(seed);
        let params = quick_params();
        let dir = sample_directions::<f64>(2, 1, dseed).pop().unwrap();
        let hi = body.support(dir.unit()).unwrap();
        let gap = gap10 as f64 / 10.0;
        let plank = Plank::new(dir, hi + gap, hi + gap + 0.5).unwrap();
        let Residual::Body(x) = convex_residual(&body, &plank, &params).unwrap() else {
            return Err(TestCaseError::fail("the body survives on one side"));
        };
        for v in sample_directions::<f64>(2, 6, dseed ^ 1) {
            let before = body.width(&v).unwrap();
            let after = x.width(&v).unwrap();
            prop_assert!((before - after).abs() <= 1e-9, "width changed {before} -> {after}");
        }
    }

    #[test]
    fn covering_planks_and_centerlines_are_consistent(seed in any::<u64>(), dseed in any::<u64>(),
                                                      pt in prop::array::uniform2(-10i64..=10)) {
        let body = fuzz_body(seed);
        let dir = sample_directions::<f64>(2, 1, dseed).pop().unwrap();
        let cover = min_covering_plank(&body, &dir).unwrap();
        prop_assert!((cover.width() - body.width(&dir).unwrap()).abs() <= 1e-15);

        let point = rational_vector(&pt);
        let along = sample_directions::<f64>(2, 1, dseed ^ 2).pop().unwrap();
        let p = plank_from_centerline(&point, &along, 0.4).unwrap();
        let mid = (p.lo() + p.hi()) / 2.0;
        prop_assert!((p.direction().unit().dot(&point) - mid).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // Slab partitions sit on the equality frontier: exact sum one in the
    // rational backend, for any direction pool entry and any cut set.
    #[test]
    fn slab_partitions_sum_to_exactly_one(cuts in prop::collection::btree_set(1u8..20, 0..3),
                                          pick in 0usize..6, triangle in any::<bool>()) {
        let body = if triangle {
            hunter_triangle::<Quad>().body
        } else {
            ConvexBody::from_box(
                &[Quad::zero(), Quad::zero()],
                &[Quad::one(), Quad::from_int(2)],
            )
        };
        let pool: [(i64, i64); 6] = [(1, 0), (0, 1), (3, 4), (4, 3), (1, 0), (0, 1)];
        let v = if pick < 4 {
            let (a, b) = pool[pick];
            Direction::new(Vector::new(vec![Quad::from_int(a), Quad::from_int(b)])).unwrap()
        } else if pick == 4 {
            Direction::new(Vector::new(vec![Quad::sqrt3(), Quad::one()])).unwrap()
        } else {
            Direction::new(Vector::new(vec![Quad::one(), Quad::sqrt3()])).unwrap()
        };
        let fracs: Vec<Quad> = cuts.iter().map(|&c| Quad::from_ratio(c as i64, 20)).collect();
        let planks = slab_partition(&body, &v, fracs.len() + 1, &fracs).unwrap();
        let params = Params::<Quad>::default();
        prop_assert!(covers(&body, &planks, &params).unwrap());
        prop_assert_eq!(
            bang_sum(&body, &planks).unwrap(),
            BangRatio::Finite(Quad::one())
        );
    }

    // The main bound under fuzzing: peelable scenes certify and their bang
    // sum clears 1 - 10*tol; no residual width collapses along the way.
    #[test]
    fn peelable_scenes_clear_the_bound(seed in any::<u64>(), dim in 2usize..=3, k in 1usize..=4) {
        let k = if dim == 3 { k.min(3) } else { k };
        let scene = random_peelable_scene::<f64>(seed, dim, k);
        let params = quick_params();
        prop_assert!(covers(&scene.body, &scene.planks, &params).unwrap());
        prop_assert!(matches!(
            residual_sequence(&scene.body, &scene.planks, &params).unwrap(),
            SequenceResult::Peeled(_)
        ));
        let order: Vec<usize> = (0..k).collect();
        let cert = certify(&scene.body, &scene.planks, &order, &params).unwrap();
        if !cert.verified {
            let report = verify_certificate(&cert, &scene.body, &scene.planks, &params);
            return Err(TestCaseError::fail(format!("diagnostics: {:?}", report.diagnostics)));
        }
        let total = cert.bang_sum.finite().unwrap();
        prop_assert!(*total >= 1.0 - 1e-8, "bang sum {total}");
        for step in &cert.steps {
            if !step.body_after.is_empty() {
                for e in &step.widths_before {
                    if matches!(e.key, WidthKey::Plank(_)) {
                        prop_assert!(e.width > 1e-12, "collapsed width at {}", e.key);
                    }
                }
            }
        }
    }
}
