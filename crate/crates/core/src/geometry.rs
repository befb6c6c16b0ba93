//! Planar primitives: points, tilted rectangles, convex polygons, clipping and
//! exact union areas of small convex families.
//!
//! All sets are closed. Orientation predicates use an absolute tolerance of
//! `1e-12` on cross products at unit scale, scaled by the squared extent of
//! the polygon so that predicates behave the same after dilation.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Cross-product tolerance at unit scale.
pub const ORIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Swap coordinates: reflection across the diagonal `y = x`.
    #[inline]
    pub fn swapped(self) -> Point2 {
        Point2::new(self.y, self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Point2,
    pub max: Point2,
}

impl BoundingBox {
    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point2>) -> Option<Self> {
        let mut it = pts.into_iter();
        let first = *it.next()?;
        let mut bb = BoundingBox {
            min: first,
            max: first,
        };
        for p in it {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn union(&self, o: &BoundingBox) -> BoundingBox {
        BoundingBox {
            min: Point2::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point2::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    fn extent(&self) -> f64 {
        self.width().max(self.height())
    }
}

/// Convex polygon with counter-clockwise vertices and no repeated or
/// collinear consecutive vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Builds a polygon from vertices in either orientation.
    ///
    /// Duplicate and collinear consecutive vertices are dropped and clockwise
    /// input is reversed. Rejects non-finite input, non-convex input and
    /// polygons whose area is at or below the orientation tolerance.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let bb = BoundingBox::of_points(&vertices).ok_or(Error::DegeneratePolygon { area: 0.0 })?;
        let tol = cross_tol(bb.extent());
        let mut v = simplify(vertices, tol);
        let area = signed_area(&v);
        if v.len() < 3 || area.abs() <= tol {
            return Err(Error::DegeneratePolygon { area: area.abs() });
        }
        if area < 0.0 {
            v.reverse();
        }
        let n = v.len();
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            let c = v[(i + 2) % n];
            if (b - a).cross(c - b) < -tol {
                return Err(Error::NotConvex);
            }
        }
        Ok(Self { vertices: v })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn axis_rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    pub fn triangle(a: Point2, b: Point2, c: Point2) -> Result<Self> {
        Self::new(vec![a, b, c])
    }

    /// Regular polygon with `n` vertices on the circle of radius `r`.
    pub fn regular(center: Point2, r: f64, n: usize, phase: f64) -> Result<Self> {
        if n < 3 || r <= 0.0 {
            return Err(invalid("regular", "need n >= 3 and r > 0"));
        }
        Self::new(
            (0..n)
                .map(|i| {
                    let t = phase + 2.0 * PI * i as f64 / n as f64;
                    center + Point2::new(t.cos(), t.sin()) * r
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::of_points(&self.vertices).expect("polygon has vertices")
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        let s = self
            .vertices
            .iter()
            .fold(Point2::ORIGIN, |acc, &p| acc + p);
        s * (1.0 / n)
    }

    /// Closed membership test.
    pub fn contains(&self, p: Point2) -> bool {
        let tol = cross_tol(self.bbox().extent());
        self.edges().all(|(a, b)| (b - a).cross(p - a) >= -tol)
    }

    pub fn translate(&self, t: Point2) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&p| p + t).collect(),
        }
    }

    /// Dilation about the origin.
    pub fn scale(&self, s: f64) -> Result<ConvexPolygon> {
        self.transform(Point2::ORIGIN, s)
    }

    /// The image under `x ↦ scale·x + translation`.
    pub fn transform(&self, translation: Point2, scale: f64) -> Result<ConvexPolygon> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(invalid("scale", format!("must be positive, got {scale}")));
        }
        Ok(ConvexPolygon {
            vertices: self
                .vertices
                .iter()
                .map(|&p| p * scale + translation)
                .collect(),
        })
    }

    /// Reflection across the diagonal `y = x` (orientation restored to CCW).
    pub fn swapped(&self) -> ConvexPolygon {
        let mut v: Vec<Point2> = self.vertices.iter().map(|p| p.swapped()).collect();
        v.reverse();
        ConvexPolygon { vertices: v }
    }

    /// Intersection with another convex polygon, `None` when empty or of
    /// zero area.
    pub fn clip(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        clip(self, other)
    }
}

fn cross_tol(extent: f64) -> f64 {
    ORIENT_TOL * extent.max(1.0).powi(2)
}

fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

fn simplify(mut v: Vec<Point2>, tol: f64) -> Vec<Point2> {
    let eps = tol.sqrt() * 1e-3;
    // repeated points
    v.dedup_by(|a, b| (*a - *b).norm() <= eps);
    while v.len() > 1 && (v[0] - v[v.len() - 1]).norm() <= eps {
        v.pop();
    }
    // collinear consecutive vertices
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            if (cur - prev).cross(next - cur).abs() <= tol {
                v.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return v;
        }
    }
}

/// Sutherland–Hodgman clipping of `subject` by the convex polygon `clipper`.
pub fn clip(subject: &ConvexPolygon, clipper: &ConvexPolygon) -> Option<ConvexPolygon> {
    let sb = subject.bbox();
    let cb = clipper.bbox();
    if sb.max.x < cb.min.x || cb.max.x < sb.min.x || sb.max.y < cb.min.y || cb.max.y < sb.min.y {
        return None;
    }
    let tol = cross_tol(sb.union(&cb).extent());
    let mut out = subject.vertices.clone();
    for (a, b) in clipper.edges() {
        if out.is_empty() {
            return None;
        }
        let dir = b - a;
        let side = |p: Point2| dir.cross(p - a);
        let input = std::mem::take(&mut out);
        let n = input.len();
        for i in 0..n {
            let cur = input[i];
            let next = input[(i + 1) % n];
            let sc = side(cur);
            let sn = side(next);
            let cin = sc >= -tol;
            let nin = sn >= -tol;
            if cin {
                out.push(cur);
            }
            if cin != nin {
                let t = sc / (sc - sn);
                out.push(cur + (next - cur) * t);
            }
        }
    }
    ConvexPolygon::new(out).ok()
}

/// Unit direction of angle `theta`.
#[inline]
pub fn direction(theta: f64) -> Point2 {
    Point2::new(theta.cos(), theta.sin())
}

/// A closed rectangle with arbitrary orientation.
///
/// `angle` is the angle of the longest side against the horizontal axis,
/// normalised to `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltedRect {
    pub center: Point2,
    pub long_half: f64,
    pub short_half: f64,
    pub angle: f64,
}

impl TiltedRect {
    pub fn new(center: Point2, long_half: f64, short_half: f64, angle: f64) -> Result<Self> {
        if !center.is_finite() || !long_half.is_finite() || !short_half.is_finite() || !angle.is_finite()
        {
            return Err(Error::NonFinite);
        }
        if !(short_half > 0.0) {
            return Err(invalid("short_half", "must be positive"));
        }
        if long_half < short_half {
            return Err(invalid("long_half", "must be at least short_half"));
        }
        Ok(Self {
            center,
            long_half,
            short_half,
            angle: angle.rem_euclid(PI),
        })
    }

    /// Rectangle with half-extent `half_a` along `theta` and `half_b`
    /// perpendicular to it, in whichever order the lengths come.
    pub fn from_axes(center: Point2, half_a: f64, half_b: f64, theta: f64) -> Result<Self> {
        if half_a >= half_b {
            Self::new(center, half_a, half_b, theta)
        } else {
            Self::new(center, half_b, half_a, theta + FRAC_PI_2)
        }
    }

    /// Axis-aligned `[x0, x1] × [y0, y1]`.
    pub fn axis_aligned(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let c = Point2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        Self::from_axes(c, 0.5 * (x1 - x0), 0.5 * (y1 - y0), 0.0)
    }

    /// Length of the shortest side, `l(R)`.
    pub fn short_side(&self) -> f64 {
        2.0 * self.short_half
    }

    /// Length of the longest side, `L(R)`.
    pub fn long_side(&self) -> f64 {
        2.0 * self.long_half
    }

    pub fn area(&self) -> f64 {
        4.0 * self.long_half * self.short_half
    }

    pub fn is_square(&self) -> bool {
        (self.long_half - self.short_half).abs() <= 1e-12 * self.long_half
    }

    /// Tangent of the angle between the longest side and the horizontal; for
    /// squares, the tangent of the smallest angle any side makes with it.
    pub fn slope(&self) -> f64 {
        if self.is_square() {
            let t = self.angle.rem_euclid(FRAC_PI_2);
            t.min(FRAC_PI_2 - t).tan()
        } else {
            self.angle.tan()
        }
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [Point2; 4] {
        let u = direction(self.angle) * self.long_half;
        let n = direction(self.angle + FRAC_PI_2) * self.short_half;
        let c = self.center;
        [c - u - n, c + u - n, c + u + n, c - u + n]
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon::new(self.corners().to_vec()).expect("rectangle sides are positive")
    }

    pub fn contains(&self, p: Point2) -> bool {
        let d = p - self.center;
        let u = direction(self.angle);
        let n = direction(self.angle + FRAC_PI_2);
        let tol = 1e-12 * self.long_half.max(1.0);
        d.dot(u).abs() <= self.long_half + tol && d.dot(n).abs() <= self.short_half + tol
    }

    /// Same centre and angle, every side pushed out by `pad` at both ends.
    pub fn enlarge(&self, pad: f64) -> Result<TiltedRect> {
        if !(pad >= 0.0) {
            return Err(invalid("pad", "must be non-negative"));
        }
        Ok(TiltedRect {
            long_half: self.long_half + pad,
            short_half: self.short_half + pad,
            ..*self
        })
    }

    pub fn translate(&self, t: Point2) -> TiltedRect {
        TiltedRect {
            center: self.center + t,
            ..*self
        }
    }

    /// Dilation about the origin.
    pub fn scale(&self, s: f64) -> Result<TiltedRect> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(invalid("scale", format!("must be positive, got {s}")));
        }
        Ok(TiltedRect {
            center: self.center * s,
            long_half: self.long_half * s,
            short_half: self.short_half * s,
            angle: self.angle,
        })
    }

    /// Reflection across the diagonal `y = x`.
    pub fn swapped(&self) -> TiltedRect {
        TiltedRect {
            center: self.center.swapped(),
            angle: (FRAC_PI_2 - self.angle).rem_euclid(PI),
            ..*self
        }
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::of_points(&self.corners()).expect("four corners")
    }
}

/// Non-empty list of convex polygons standing for their set union.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonFamily {
    members: Vec<ConvexPolygon>,
}

impl PolygonFamily {
    pub fn new(members: Vec<ConvexPolygon>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[ConvexPolygon] {
        &self.members
    }

    pub fn union_area(&self) -> f64 {
        union_area(&self.members)
    }

    pub fn area_sum(&self) -> f64 {
        self.members.iter().map(ConvexPolygon::area).sum()
    }

    pub fn bbox(&self) -> BoundingBox {
        self.members
            .iter()
            .map(ConvexPolygon::bbox)
            .reduce(|a, b| a.union(&b))
            .expect("non-empty family")
    }

    pub fn transform(&self, translation: Point2, scale: f64) -> Result<PolygonFamily> {
        Ok(PolygonFamily {
            members: self
                .members
                .iter()
                .map(|p| p.transform(translation, scale))
                .collect::<Result<_>>()?,
        })
    }
}

/// Exact area of the union of convex polygons by a vertical slab sweep.
///
/// Breakpoints are every vertex abscissa and every abscissa where two edges
/// of different polygons cross. Inside a slab the vertical section of each
/// polygon is one interval whose endpoints move linearly and never cross
/// each other, so the union length is linear and the trapezoid rule is exact.
pub fn union_area(polys: &[ConvexPolygon]) -> f64 {
    match polys.len() {
        0 => return 0.0,
        1 => return polys[0].area(),
        _ => {}
    }
    let boxes: Vec<BoundingBox> = polys.iter().map(ConvexPolygon::bbox).collect();
    let mut xs: Vec<f64> = polys
        .iter()
        .flat_map(|p| p.vertices.iter().map(|v| v.x))
        .collect();

    // Non-vertical edges per polygon, as (left point, right point).
    let edges: Vec<Vec<(Point2, Point2)>> = polys
        .iter()
        .map(|p| {
            p.edges()
                .filter(|(a, b)| a.x != b.x)
                .map(|(a, b)| if a.x < b.x { (a, b) } else { (b, a) })
                .collect()
        })
        .collect();

    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            let (bi, bj) = (&boxes[i], &boxes[j]);
            if bi.max.x < bj.min.x
                || bj.max.x < bi.min.x
                || bi.max.y < bj.min.y
                || bj.max.y < bi.min.y
            {
                continue;
            }
            for &(p0, p1) in &edges[i] {
                for &(q0, q1) in &edges[j] {
                    if let Some(x) = segment_crossing_x(p0, p1, q0, q1) {
                        xs.push(x);
                    }
                }
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut total = 0.0;
    let mut left: Vec<(f64, f64)> = Vec::with_capacity(polys.len());
    let mut right: Vec<(f64, f64)> = Vec::with_capacity(polys.len());
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        let xm = 0.5 * (x0 + x1);
        left.clear();
        right.clear();
        for (k, b) in boxes.iter().enumerate() {
            if !(b.min.x < xm && xm < b.max.x) {
                continue;
            }
            let mut lo: Option<(f64, (Point2, Point2))> = None;
            let mut hi: Option<(f64, (Point2, Point2))> = None;
            for &(a, c) in &edges[k] {
                if a.x <= xm && xm <= c.x {
                    let y = line_y(a, c, xm);
                    if lo.is_none_or(|(ly, _)| y < ly) {
                        lo = Some((y, (a, c)));
                    }
                    if hi.is_none_or(|(hy, _)| y > hy) {
                        hi = Some((y, (a, c)));
                    }
                }
            }
            if let (Some((_, le)), Some((_, he))) = (lo, hi) {
                left.push((line_y(le.0, le.1, x0), line_y(he.0, he.1, x0)));
                right.push((line_y(le.0, le.1, x1), line_y(he.0, he.1, x1)));
            }
        }
        if left.is_empty() {
            continue;
        }
        let len0 = interval_union_length(&mut left);
        let len1 = interval_union_length(&mut right);
        total += 0.5 * (len0 + len1) * (x1 - x0);
    }
    total
}

#[inline]
fn line_y(a: Point2, b: Point2, x: f64) -> f64 {
    a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
}

fn segment_crossing_x(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> Option<f64> {
    let r = p1 - p0;
    let s = q1 - q0;
    let d = r.cross(s);
    if d == 0.0 {
        return None;
    }
    let qp = q0 - p0;
    let t = qp.cross(s) / d;
    let u = qp.cross(r) / d;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(p0.x + t * r.x)
    } else {
        None
    }
}

fn interval_union_length(iv: &mut [(f64, f64)]) -> f64 {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut len = 0.0;
    let (mut cs, mut ce) = iv[0];
    for &(s, e) in &iv[1..] {
        if s > ce {
            len += (ce - cs).max(0.0);
            cs = s;
            ce = e;
        } else if e > ce {
            ce = e;
        }
    }
    len + (ce - cs).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::axis_rect(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn area_examples() {
        assert_eq!(unit_square().area(), 1.0);
        let t = ConvexPolygon::triangle(p(1.0, 0.0), p(0.0, 1.0), p(0.0, 0.0)).unwrap();
        assert_eq!(t.area(), 0.5);
        let t = ConvexPolygon::triangle(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        assert_eq!(t.area(), 0.5);
    }

    #[test]
    fn degenerate_and_nonconvex_rejected() {
        let sliver = ConvexPolygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]);
        assert!(matches!(sliver, Err(Error::DegeneratePolygon { .. })));
        let dart = ConvexPolygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.3), p(1.0, 2.0)]);
        assert_eq!(dart, Err(Error::NotConvex));
        assert_eq!(
            ConvexPolygon::new(vec![p(f64::NAN, 0.0), p(1.0, 0.0), p(0.0, 1.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn clockwise_input_is_reoriented_and_collinear_points_dropped() {
        let sq = ConvexPolygon::new(vec![
            p(0.0, 0.0),
            p(0.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 0.5),
            p(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.area(), 1.0);
    }

    #[test]
    fn clip_examples() {
        let sq = unit_square();
        let same = sq.clip(&sq).unwrap();
        assert!((same.area() - 1.0).abs() < 1e-9);

        let far = ConvexPolygon::axis_rect(5.0, 6.0, 5.0, 6.0).unwrap();
        assert!(sq.clip(&far).is_none());

        let r = ConvexPolygon::axis_rect(-0.75, 0.75, 0.25, 1.75).unwrap();
        let t = ConvexPolygon::triangle(p(1.0, 0.0), p(0.0, 1.0), p(0.0, 0.0)).unwrap();
        let c = r.clip(&t).unwrap();
        assert!((c.area() - 9.0 / 32.0).abs() < 1e-12);
        assert!((t.clip(&r).unwrap().area() - 9.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn union_area_examples() {
        let a = unit_square();
        let b = a.translate(p(3.0, 0.0));
        assert!((union_area(&[a.clone(), b]) - 2.0).abs() < 1e-12);
        assert!((union_area(&[a.clone(), a.clone()]) - 1.0).abs() < 1e-12);
        // half-overlap squares
        let c = a.translate(p(0.5, 0.5));
        assert!((union_area(&[a, c]) - 1.75).abs() < 1e-12);
        assert!(PolygonFamily::new(vec![]).is_err());
    }

    #[test]
    fn union_area_two_triangles_shifted() {
        // shear-equivalent to the symmetric split; union area 1 - t + 3t²/4
        // for unit-base halves of a base-2 triangle slid together by t
        let t1 = ConvexPolygon::triangle(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        let t2 = ConvexPolygon::triangle(p(0.0, 1.0), p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        for &t in &[0.0, 0.25, 0.5, 2.0 / 3.0, 1.0] {
            let u = union_area(&[t1.clone(), t2.translate(p(-t, 0.0))]);
            assert!((u - (1.0 - t + 0.75 * t * t)).abs() < 1e-12, "t={t} u={u}");
        }
    }

    #[test]
    fn transform_examples() {
        let sq = unit_square();
        assert!((sq.scale(3.0).unwrap().area() - 9.0).abs() < 1e-12);
        let t = ConvexPolygon::triangle(p(1.0, 0.0), p(0.0, 1.0), p(0.0, 0.0)).unwrap();
        assert_eq!(t.translate(p(5.0, -2.0)).area(), 0.5);
        assert!((t.scale(200.0).unwrap().area() - 20000.0).abs() < 1e-9);
        assert!(sq.scale(0.0).is_err());
        assert!(sq.scale(-1.0).is_err());
    }

    #[test]
    fn enlarge_examples() {
        let r = TiltedRect::axis_aligned(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(r.enlarge(0.0).unwrap(), r);
        let s2 = 2f64.sqrt();
        let big = r.enlarge(s2).unwrap();
        let alpha = 9.0 + 4.0 * s2;
        assert!((big.area() / r.area() - alpha).abs() < 1e-12);
        let r = TiltedRect::axis_aligned(0.0, 2.0, 0.0, 10.0).unwrap();
        let ratio = r.enlarge(s2).unwrap().area() / r.area();
        assert!((ratio - (2.0 + 2.0 * s2) * (10.0 + 2.0 * s2) / 20.0).abs() < 1e-12);
        assert!(ratio <= alpha);
        assert!(r.enlarge(-1.0).is_err());
    }

    #[test]
    fn slope_conventions() {
        let r = TiltedRect::new(Point2::ORIGIN, 5.0, 1.0, (0.5f64).atan()).unwrap();
        assert!((r.slope() - 0.5).abs() < 1e-12);
        // a square tilted by 70° has sides at 70° and 160°; smallest angle 20°
        let sq = TiltedRect::new(Point2::ORIGIN, 1.0, 1.0, 70f64.to_radians()).unwrap();
        assert!((sq.slope() - 20f64.to_radians().tan()).abs() < 1e-12);
        // long side vertical after normalisation
        let v = TiltedRect::axis_aligned(0.0, 1.0, 0.0, 4.0).unwrap();
        assert!((v.angle - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn rect_polygon_round_trip() {
        let r = TiltedRect::new(p(3.0, -1.0), 7.0, 2.5, 0.3).unwrap();
        assert!((r.to_polygon().area() - 4.0 * 7.0 * 2.5).abs() < 1e-9);
        for c in r.corners() {
            assert!(r.contains(c));
        }
        let s = r.swapped();
        for c in r.corners() {
            assert!(s.contains(c.swapped()));
        }
    }
}
