//! The triangle `Δ = ABC` with `A = (1, 0)`, `B = (0, b)`, `C = (0, c)`, its
//! dilation `AB′C′` by 3/2 from `A`, the smallest rectangle on the line
//! `(AC′)` containing `AB′C′`, and the trapezium `V = BCC′B′`.
//!
//! For every `x ∈ V` the translate `x + P` of the recentred rectangle meets
//! `Δ` in area at least `min(α, 1)/72 · |P|`, where `α = |AB|/|BC|`, provided
//! `C` is the endpoint farther from the foot `(0, 0)` of the altitude, so that
//! the rectangle runs along the longer edge ([`Construction1::with_far_c`]).
//! The overlap at `B′` is exactly `|P|/72`, so the bound is attained there
//! once `α >= 1`. With `c < b` ([`Construction1::new`]) the rectangle runs
//! along the shorter edge; the bound is tight at `B′` for `(b, c) = (1, 0)`
//! and fails there for larger `b`.
//! This module measures the overlap both as an area and as a lattice count
//! after dilation.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexPolygon, Point2, TiltedRect};
use crate::lattice::count_points;

/// Constant in the overlap bound `min(α, 1)/72 · |P|`.
pub const OVERLAP_CONSTANT: f64 = 1.0 / 72.0;

/// Relative slack on `measured >= bound`: the bound is attained exactly at a
/// vertex of `V`, where rounding lands on either side.
pub const OVERLAP_REL_TOL: f64 = 1e-9;

/// Dilation factor from `A` producing `B′` and `C′`.
pub const DILATION: f64 = 1.5;

/// Lattice envelope applied to the continuous bound: counts sit within
/// `[1/2, 3/2]` of areas, so the discrete ratio keeps `(1/2)/(3/2) = 1/3` of it.
pub const DISCRETE_ENVELOPE: f64 = 0.5 / 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction1 {
    pub b: f64,
    pub c: f64,
    pub a_pt: Point2,
    pub b_pt: Point2,
    pub c_pt: Point2,
    pub b_prime: Point2,
    pub c_prime: Point2,
    /// Rectangle with one side on `(AC′)` containing `AB′C′`.
    pub p_tilde: TiltedRect,
    /// `p_tilde` translated so its centre is the origin.
    pub p: TiltedRect,
    /// Trapezium `BCC′B′`.
    pub v: ConvexPolygon,
    /// `|AB| / |BC|`.
    pub alpha: f64,
}

impl Construction1 {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !b.is_finite() || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(b > 0.0) {
            return Err(invalid("b", "must be positive"));
        }
        if !(c >= 0.0 && c < b) {
            return Err(invalid("c", "need 0 <= c < b"));
        }
        Self::build(b, c)
    }

    /// Same construction with `C` allowed above `B` (`0 <= b < c`): `C` is
    /// then the endpoint farther from the foot of the altitude, and the side
    /// of `P̃` runs along the longer edge `AC′`.
    pub fn with_far_c(b: f64, c: f64) -> Result<Self> {
        if !b.is_finite() || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(b >= 0.0 && b < c) {
            return Err(invalid("b", "need 0 <= b < c"));
        }
        Self::build(b, c)
    }

    fn build(b: f64, c: f64) -> Result<Self> {
        let a_pt = Point2::new(1.0, 0.0);
        let b_pt = Point2::new(0.0, b);
        let c_pt = Point2::new(0.0, c);
        let b_prime = a_pt + (b_pt - a_pt) * DILATION;
        let c_prime = a_pt + (c_pt - a_pt) * DILATION;

        let ac = c_prime - a_pt;
        let d = ac * (1.0 / ac.norm());
        let mut n = Point2::new(-d.y, d.x);
        if (b_prime - a_pt).dot(n) < 0.0 {
            n = -n;
        }
        let ts = [0.0, ac.norm(), (b_prime - a_pt).dot(d)];
        let t_min = ts.iter().copied().fold(f64::INFINITY, f64::min);
        let t_max = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let height = (b_prime - a_pt).dot(n);
        let center = a_pt + d * (0.5 * (t_min + t_max)) + n * (0.5 * height);
        let p_tilde = TiltedRect::from_axes(
            center,
            0.5 * (t_max - t_min),
            0.5 * height,
            d.y.atan2(d.x),
        )?;
        let p = p_tilde.translate(-center);
        let v = ConvexPolygon::new(vec![b_pt, c_pt, c_prime, b_prime])?;
        let alpha = (b_pt - a_pt).norm() / (b - c).abs();
        Ok(Self {
            b,
            c,
            a_pt,
            b_pt,
            c_pt,
            b_prime,
            c_prime,
            p_tilde,
            p,
            v,
            alpha,
        })
    }

    /// Triangle `ABC`.
    pub fn triangle(&self) -> ConvexPolygon {
        ConvexPolygon::triangle(self.a_pt, self.b_pt, self.c_pt).expect("b != c")
    }

    /// Triangle `AB′C′`.
    pub fn enlarged_triangle(&self) -> ConvexPolygon {
        ConvexPolygon::triangle(self.a_pt, self.b_prime, self.c_prime).expect("b != c")
    }

    /// `min(α, 1)/72 · |P|`.
    pub fn overlap_bound(&self) -> f64 {
        self.alpha.min(1.0) * OVERLAP_CONSTANT * self.p.area()
    }

    /// Lower bound demanded of `#(δ((x+P)∩Δ) ∩ Z²) / #(δP ∩ Z²)`.
    pub fn discrete_threshold(&self) -> f64 {
        self.alpha.min(1.0) * OVERLAP_CONSTANT * DISCRETE_ENVELOPE
    }

    /// `(x + P) ∩ Δ`, `None` when the overlap has no area.
    pub fn overlap_region(&self, x: Point2) -> Option<ConvexPolygon> {
        self.p.translate(x).to_polygon().clip(&self.triangle())
    }

    /// Vertices, edge midpoints and `uniform` rejection samples of `V`.
    pub fn sample_trapezium<R: Rng>(&self, uniform: usize, rng: &mut R) -> Vec<Point2> {
        let vs = self.v.vertices();
        let mut out: Vec<Point2> = vs.to_vec();
        out.extend(self.v.edges().map(|(a, b)| (a + b) * 0.5));
        let bb = self.v.bbox();
        while out.len() < vs.len() * 2 + uniform {
            let x = Point2::new(
                rng.gen_range(bb.min.x..=bb.max.x),
                rng.gen_range(bb.min.y..=bb.max.y),
            );
            if self.v.contains(x) {
                out.push(x);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapCheck {
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `|(x + P) ∩ Δ|` against `min(α, 1)/72 · |P|`, for `x ∈ V`.
pub fn verify_overlap(cons: &Construction1, x: Point2) -> Result<OverlapCheck> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if !cons.v.contains(x) {
        return Err(Error::OutsideTrapezium { x: x.x, y: x.y });
    }
    let measured = cons.overlap_region(x).map_or(0.0, |r| r.area());
    let bound = cons.overlap_bound();
    Ok(OverlapCheck {
        measured,
        bound,
        pass: measured >= bound * (1.0 - OVERLAP_REL_TOL),
    })
}

/// Worst lattice ratio `#(δ((x+P)∩Δ) ∩ Z²) / #(δP ∩ Z²)` over `samples`.
pub fn discrete_overlap_ratio(cons: &Construction1, samples: &[Point2], delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid("delta", "must be positive"));
    }
    let denom = count_points(&cons.p.to_polygon().scale(delta)?);
    if denom == 0 {
        return Ok(0.0);
    }
    let mut worst = f64::INFINITY;
    for &x in samples {
        let num = match cons.overlap_region(x) {
            Some(r) => count_points(&r.scale(delta)?),
            None => 0,
        };
        worst = worst.min(num as f64 / denom as f64);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteScale {
    pub delta: f64,
    pub worst_ratio: f64,
    pub threshold: f64,
    /// `(δ, worst ratio)` for every scale tried.
    pub trace: Vec<(f64, f64)>,
}

/// Smallest scale on `delta_grid` at which the worst lattice ratio over
/// `samples` reaches [`Construction1::discrete_threshold`].
pub fn discrete_overlap_scale(
    cons: &Construction1,
    samples: &[Point2],
    delta_grid: &[f64],
) -> Result<DiscreteScale> {
    let threshold = cons.discrete_threshold();
    let mut trace = Vec::new();
    for &delta in delta_grid {
        let worst = discrete_overlap_ratio(cons, samples, delta)?;
        trace.push((delta, worst));
        if worst >= threshold {
            return Ok(DiscreteScale {
                delta,
                worst_ratio: worst,
                threshold,
                trace,
            });
        }
    }
    Err(Error::ScaleNotFound {
        tried: delta_grid.to_vec(),
    })
}

/// Doubling grid `start, 2·start, …` up to and including `end`.
pub fn doubling_grid(start: f64, end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut d = start;
    while d <= end * (1.0 + 1e-12) {
        out.push(d);
        d *= 2.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_case_geometry() {
        let c = Construction1::new(1.0, 0.0).unwrap();
        assert_eq!(c.b_prime, Point2::new(-0.5, 1.5));
        assert_eq!(c.c_prime, Point2::new(-0.5, 0.0));
        assert!((c.p_tilde.area() - 9.0 / 4.0).abs() < 1e-12);
        let bb = c.p_tilde.bbox();
        assert!((bb.min.x + 0.5).abs() < 1e-12 && (bb.max.x - 1.0).abs() < 1e-12);
        assert!(bb.min.y.abs() < 1e-12 && (bb.max.y - 1.5).abs() < 1e-12);
        assert!(c.p.center.norm() < 1e-15);
        assert!((c.alpha - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.v.vertices().len(), 4);
        for q in [c.b_pt, c.c_pt, c.c_prime, c.b_prime] {
            assert!(c.v.vertices().contains(&q));
        }
    }

    #[test]
    fn second_case_and_trapezium_area() {
        let c = Construction1::new(2.0, 1.0).unwrap();
        assert_eq!(c.b_prime, Point2::new(-0.5, 3.0));
        assert_eq!(c.c_prime, Point2::new(-0.5, 1.5));
        assert!((c.alpha - 5f64.sqrt()).abs() < 1e-12);
        for (b, cc) in [(1.0, 0.0), (2.0, 1.0), (5.0, 0.5), (0.3, 0.29)] {
            let k = Construction1::new(b, cc).unwrap();
            let tri = k.triangle().area();
            assert!((k.v.area() - 1.25 * tri).abs() < 1e-12 * tri.max(1.0));
            assert!((k.enlarged_triangle().area() - k.v.area() - tri).abs() < 1e-12 * tri.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Construction1::new(1.0, 1.0).is_err());
        assert!(Construction1::new(0.0, 0.0).is_err());
        assert!(Construction1::new(1.0, -0.1).is_err());
    }

    #[test]
    fn overlap_hand_case() {
        let c = Construction1::new(1.0, 0.0).unwrap();
        let r = verify_overlap(&c, Point2::new(0.0, 1.0)).unwrap();
        assert!((r.measured - 9.0 / 32.0).abs() < 1e-12);
        assert!((r.bound - 1.0 / 32.0).abs() < 1e-12);
        assert!(r.pass);
        let r = verify_overlap(&c, Point2::new(0.0, 0.0)).unwrap();
        assert!(r.measured > 0.0 && r.pass);
        assert!(matches!(
            verify_overlap(&c, Point2::new(3.0, 3.0)),
            Err(Error::OutsideTrapezium { .. })
        ));
    }

    #[test]
    fn far_orientation_meets_the_bound_and_b_prime_overlap_is_p_over_72() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let far = rng.gen_range(0.1..10.0);
            let near = rng.gen_range(0.0..far * 0.99);
            let k = Construction1::with_far_c(near, far).unwrap();
            for x in k.sample_trapezium(30, &mut rng) {
                assert!(verify_overlap(&k, x).unwrap().pass, "({near}, {far}) at {x:?}");
            }
            // the overlap at B′ is exactly |P|/72, so the bound is tight once α >= 1
            let r = verify_overlap(&k, k.b_prime).unwrap();
            assert!((r.measured / (k.p.area() / 72.0) - 1.0).abs() < 1e-9, "({near}, {far})");
        }
        // mirrored hand case
        let k = Construction1::with_far_c(0.0, 1.0).unwrap();
        let r = verify_overlap(&k, Point2::new(0.0, 0.0)).unwrap();
        assert!((r.measured - 9.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn near_orientation_breaks_the_bound_for_large_b() {
        let k = Construction1::new(5.0, 0.5).unwrap();
        let r = verify_overlap(&k, k.b_prime).unwrap();
        assert!(!r.pass && r.measured < 0.5 * r.bound);
    }

    #[test]
    fn rectangle_contains_enlarged_triangle() {
        for (b, cc) in [(1.0, 0.0), (2.0, 1.0), (5.0, 0.5), (9.0, 8.5)] {
            let k = Construction1::new(b, cc).unwrap();
            for q in [k.a_pt, k.b_prime, k.c_prime] {
                assert!(k.p_tilde.contains(q));
            }
            assert!((k.p_tilde.area() - k.p.area()).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_include_vertices_and_lie_in_v() {
        let c = Construction1::new(2.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = c.sample_trapezium(20, &mut rng);
        assert_eq!(s.len(), 28);
        assert!(s.iter().all(|&x| c.v.contains(x)));
        assert!(s.contains(&c.c_prime));
    }

    #[test]
    fn discrete_scale_unit_case() {
        let c = Construction1::new(1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = c.sample_trapezium(50, &mut rng);
        let grid = doubling_grid(8.0, 1024.0);
        let found = discrete_overlap_scale(&c, &s, &grid).unwrap();
        assert!(found.worst_ratio >= found.threshold);
        let again = discrete_overlap_ratio(&c, &s, 2.0 * found.delta).unwrap();
        assert!(again >= found.threshold);
    }

    #[test]
    fn doubling_grid_bounds() {
        assert_eq!(doubling_grid(8.0, 64.0), vec![8.0, 16.0, 32.0, 64.0]);
    }
}
