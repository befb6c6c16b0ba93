use std::f64::consts::PI;

use perron_lab::directions::{condition_i_constant, gen_power, perron_factor, DirectionSet};
use perron_lab::discrete_maximal::{average, maximal, weak_p_witness, GridFunction, RectFamily};
use perron_lab::ergodic_torus::{ergodic_average, ObservedFunction, TorusSystem};
use perron_lab::geometry::{union_area, ConvexPolygon, Point2, TiltedRect};
use perron_lab::lattice::{check_process_ratio, count_points, IntBox};
use perron_lab::perron_tree::{assemble_block, OptimizerConfig, TranslationMethod};
use perron_lab::triangle_cover::{verify_overlap, Construction1, DILATION};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point2> {
    (-20.0..20.0f64, -20.0..20.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

/// Convex polygon from sorted angles on an ellipse.
fn convex() -> impl Strategy<Value = ConvexPolygon> {
    (
        point(),
        0.5..8.0f64,
        0.5..8.0f64,
        prop::collection::vec(0.0..2.0 * PI, 3..9),
    )
        .prop_filter_map("degenerate", |(c, a, b, mut th)| {
            th.sort_by(f64::total_cmp);
            let v = th.iter().map(|t| Point2::new(c.x + a * t.cos(), c.y + b * t.sin())).collect();
            ConvexPolygon::new(v).ok().filter(|p| p.area() > 1e-3)
        })
}

fn tilted() -> impl Strategy<Value = TiltedRect> {
    (point(), 0.2..10.0f64, 0.2..10.0f64, 0.0..PI)
        .prop_map(|(c, a, b, t)| TiltedRect::from_axes(c, a, b, t).unwrap())
}

fn rect_at_origin() -> impl Strategy<Value = TiltedRect> {
    (0.5..6.0f64, 0.5..3.0f64, 0.0..PI, -0.4..0.4f64, -0.4..0.4f64).prop_map(|(a, b, t, fx, fy)| {
        let r = TiltedRect::from_axes(Point2::ORIGIN, a, b, t).unwrap();
        let u = Point2::new(t.cos(), t.sin());
        let n = Point2::new(-t.sin(), t.cos());
        r.translate(u * (fx * a) + n * (fy * b))
    })
}

fn grid(w: i64) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(-3.0..3.0f64, (w * w) as usize)
        .prop_map(move |v| GridFunction::new(IntBox::new(0, w - 1, 0, w - 1), v).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transform_scales_area(p in convex(), t in point(), s in 0.1..100.0f64) {
        let q = p.transform(t, s).unwrap();
        prop_assert!(close(q.area(), s * s * p.area(), 1e-9));
    }

    #[test]
    fn union_bounds(ps in prop::collection::vec(convex(), 1..5)) {
        let u = union_area(&ps);
        let sum: f64 = ps.iter().map(|p| p.area()).sum();
        let max = ps.iter().map(|p| p.area()).fold(0.0, f64::max);
        prop_assert!(u <= sum * (1.0 + 1e-9));
        prop_assert!(u >= max * (1.0 - 1e-9));
    }

    #[test]
    fn union_of_disjoint_is_additive(ps in prop::collection::vec(convex(), 1..5)) {
        // spread the members along x so that they cannot meet
        let spread: Vec<ConvexPolygon> = ps.iter().enumerate()
            .map(|(i, p)| p.translate(Point2::new(100.0 * i as f64, 0.0)))
            .collect();
        let sum: f64 = ps.iter().map(|p| p.area()).sum();
        prop_assert!(close(union_area(&spread), sum, 1e-9));
    }

    #[test]
    fn clip_area_is_symmetric(p in convex(), q in convex()) {
        let a = p.clip(&q).map_or(0.0, |r| r.area());
        let b = q.clip(&p).map_or(0.0, |r| r.area());
        prop_assert!((a - b).abs() <= 1e-9 * p.area().max(q.area()));
    }

    #[test]
    fn rect_polygon_round_trip(r in tilted()) {
        prop_assert!(close(r.to_polygon().area(), 4.0 * r.long_half * r.short_half, 1e-9));
    }

    #[test]
    fn slope_ignores_translation_and_scaling(r in tilted(), t in point(), s in 0.1..50.0f64) {
        let a = r.slope();
        prop_assert!(close(r.translate(t).slope(), a, 1e-9));
        prop_assert!(close(r.scale(s).unwrap().slope(), a, 1e-9));
    }

    #[test]
    fn counts_are_monotone(q in convex(), f in 0.05..1.0f64) {
        // p is q shrunk towards its centroid, so p ⊆ q
        let c = q.centroid();
        let p = q.transform(c * (1.0 - f), f).unwrap();
        prop_assert!(p.vertices().iter().all(|&v| q.contains(v)));
        prop_assert!(count_points(&p) <= count_points(&q));
    }

    #[test]
    fn integer_translation_keeps_counts(p in convex(), dx in -50i64..50, dy in -50i64..50) {
        let q = p.translate(Point2::new(dx as f64, dy as f64));
        prop_assert_eq!(count_points(&p), count_points(&q));
    }

    #[test]
    fn large_rects_sit_near_one(l in 100.0..200.0f64, k in 1.0..4.0f64, t in 0.0..PI, c in point()) {
        let r = TiltedRect::from_axes(c, 0.5 * l * k, 0.5 * l, t).unwrap();
        let pr = check_process_ratio(&r);
        prop_assert!(pr.ratio >= 0.9 && pr.ratio <= 1.1, "{}", pr.ratio);
        prop_assert!(pr.within_sandwich());
    }

    #[test]
    fn perron_factor_at_least_two(u in prop::collection::vec(0.01..5.0f64, 4..20)) {
        let mut acc = 0.0;
        let u: Vec<f64> = u.iter().map(|d| { acc += d; acc }).collect();
        let d = DirectionSet::from_u("random", &u).unwrap();
        prop_assert!(perron_factor(&d, d.max_index()).unwrap().value >= 2.0 - 1e-12);
    }

    #[test]
    fn condition_i_is_antitone(u in prop::collection::vec(0.01..5.0f64, 4..20)) {
        let mut acc = 0.0;
        let u: Vec<f64> = u.iter().map(|d| { acc += d; acc }).collect();
        let d = DirectionSet::from_u("random", &u).unwrap();
        let cs: Vec<f64> = (1..=d.max_index()).map(|m| condition_i_constant(&d, m).unwrap()).collect();
        prop_assert!(cs.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn power_sets_are_monotone(s in 0.05..4.0f64, n in 2usize..80) {
        let d = gen_power(s, n).unwrap();
        prop_assert!(d.u().windows(2).all(|w| w[1] > w[0]));
        prop_assert!(d.slopes().windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn construction_invariants(far in 0.1..10.0f64, f in 0.0..0.99f64) {
        let near = f * far;
        for c in [Construction1::new(far, near).unwrap(), Construction1::with_far_c(near, far).unwrap()] {
            let d = c.b_prime - c.a_pt - (c.b_pt - c.a_pt) * DILATION;
            prop_assert!(d.norm() <= 1e-12 * far.max(1.0));
            prop_assert!(close(c.p_tilde.area(), c.p.area(), 1e-12));
            for q in [c.a_pt, c.b_prime, c.c_prime] {
                prop_assert!(c.p_tilde.contains(q));
            }
            prop_assert!(c.overlap_bound() <= c.p.area() / 72.0 * (1.0 + 1e-12));
        }
        // the bound itself, on every vertex of V, for the longer-edge orientation
        let c = Construction1::with_far_c(near, far).unwrap();
        for &x in c.v.vertices() {
            prop_assert!(verify_overlap(&c, x).unwrap().pass);
        }
    }

    #[test]
    fn average_is_linear_and_monotone(phi in grid(12), psi in grid(12), r in rect_at_origin(), a in -2.0..2.0f64) {
        let at = (6, 6);
        let combo = GridFunction::from_fn(phi.window(), |x, y| phi.get(x, y) + a * psi.get(x, y));
        let lhs = average(&combo, &r, at).unwrap();
        let rhs = average(&phi, &r, at).unwrap() + a * average(&psi, &r, at).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
        let big = GridFunction::from_fn(phi.window(), |x, y| phi.get(x, y).max(psi.get(x, y)));
        prop_assert!(average(&phi, &r, at).unwrap() <= average(&big, &r, at).unwrap() + 1e-12);
    }

    #[test]
    fn maximal_dominates_members_and_splits_over_unions(
        phi in grid(14),
        f1 in prop::collection::vec(rect_at_origin(), 1..4),
        f2 in prop::collection::vec(rect_at_origin(), 1..4),
    ) {
        let w = IntBox::new(0, 13, 0, 13);
        let a = RectFamily::new(f1.clone()).unwrap();
        let b = RectFamily::new(f2).unwrap();
        let ma = maximal(&phi, &a, w);
        let mb = maximal(&phi, &b, w);
        let mab = maximal(&phi, &a.union(&b), w);
        let abs = phi.abs();
        for y in 0..14 {
            for x in 0..14 {
                prop_assert_eq!(mab.get(x, y), ma.get(x, y).max(mb.get(x, y)));
                for r in &f1 {
                    prop_assert!(ma.get(x, y) >= average(&abs, r, (x, y)).unwrap());
                }
            }
        }
    }

    #[test]
    fn maximal_commutes_with_integer_shifts(phi in grid(12), f in prop::collection::vec(rect_at_origin(), 1..4), dx in -9i64..9, dy in -9i64..9) {
        let fam = RectFamily::new(f).unwrap();
        let w = IntBox::new(-2, 13, -2, 13);
        let m = maximal(&phi, &fam, w);
        let ms = maximal(&phi.shift(dx, dy), &fam, w.shift(dx, dy));
        for y in w.y0..=w.y1 {
            for x in w.x0..=w.x1 {
                prop_assert_eq!(m.get(x, y), ms.get(x + dx, y + dy));
            }
        }
    }

    #[test]
    fn witness_is_homogeneous(phi in grid(10), f in prop::collection::vec(rect_at_origin(), 1..4), l in 0.05..2.0f64, p in 1.0..4.0f64) {
        let fam = RectFamily::new(f).unwrap();
        let a = weak_p_witness(&phi, &fam, l, p).unwrap();
        let b = weak_p_witness(&phi.scale(7.0), &fam, 7.0 * l, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn constants_average_exactly(c in -5.0..5.0f64, r in rect_at_origin(), x0 in 0.0..1.0f64) {
        let sys = TorusSystem::default();
        prop_assert_eq!(ergodic_average(&sys, &ObservedFunction::constant(c), &r, x0).unwrap(), c);
    }
}

#[test]
fn untranslated_block_area_and_epsilon_bounds() {
    let cfg = OptimizerConfig::new(TranslationMethod::CoordinateSearch);
    for s in [1.0, 2.0] {
        let d = gen_power(s, 40).unwrap();
        let u = d.u();
        let mut prev = f64::INFINITY;
        for n in 0..=3u32 {
            let b = assemble_block(&d, n, &cfg).unwrap();
            let first = 1usize << n;
            let last = (1usize << (n + 1)) - 1;
            let expect = 0.5 * (u[last] - u[first - 1]);
            assert!((b.original_area() - expect).abs() <= 1e-9 * expect);
            let sum: f64 = b.triangles.iter().map(|t| t.area()).sum();
            let moved: f64 = b.k_members().iter().map(|t| t.area()).sum();
            assert!((sum - moved).abs() <= 1e-9 * sum);
            assert!(b.epsilon <= 1.0 && b.epsilon > 0.0);
            assert!(b.epsilon <= prev + 1e-12, "s = {s}, n = {n}");
            prev = b.epsilon;
            // trapezia inside the enlarged triangles, both untranslated
            for (v, e) in b.trapezia.iter().zip(&b.enlarged) {
                let tol = 1e-9 * e.bbox().width().max(e.bbox().height());
                for &p in v.vertices() {
                    let inside = e.contains(p) || e.edges().any(|(a, q)| {
                        let t = ((p - a).dot(q - a) / (q - a).dot(q - a)).clamp(0.0, 1.0);
                        (a + (q - a) * t - p).norm() <= tol
                    });
                    assert!(inside, "s = {s}, n = {n}");
                }
            }
        }
    }
}

#[test]
fn perron_factor_of_integers_is_two() {
    let d = gen_power(1.0, 200).unwrap();
    for n in [3, 10, 50, 200] {
        assert_eq!(perron_factor(&d, n).unwrap().value, 2.0);
    }
}
