//! Integer points inside closed convex regions.
//!
//! Counting is a scanline over integer rows: each row meets a convex polygon
//! in one interval `[x_min, x_max]`, snapped by `1e-9` toward inclusion.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{ConvexPolygon, TiltedRect};

/// Inclusion snap applied to row intersections.
pub const SNAP: f64 = 1e-9;

/// Inclusive integer box `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntBox {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl IntBox {
    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> usize {
        (self.x1 - self.x0 + 1).max(0) as usize
    }

    pub fn height(&self) -> usize {
        (self.y1 - self.y0 + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn union(&self, o: &IntBox) -> IntBox {
        IntBox::new(
            self.x0.min(o.x0),
            self.x1.max(o.x1),
            self.y0.min(o.y0),
            self.y1.max(o.y1),
        )
    }

    pub fn pad(&self, by: i64) -> IntBox {
        IntBox::new(self.x0 - by, self.x1 + by, self.y0 - by, self.y1 + by)
    }

    pub fn shift(&self, dx: i64, dy: i64) -> IntBox {
        IntBox::new(self.x0 + dx, self.x1 + dx, self.y0 + dy, self.y1 + dy)
    }
}

/// Lattice points of one row: `{(x, y) : x0 <= x <= x1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowSpan {
    pub y: i64,
    pub x0: i64,
    pub x1: i64,
}

impl RowSpan {
    pub fn len(&self) -> u64 {
        (self.x1 - self.x0 + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.x1 < self.x0
    }
}

/// Row spans of a closed convex polygon, bottom row first.
pub fn row_spans(p: &ConvexPolygon) -> Vec<RowSpan> {
    let bb = p.bbox();
    let y_lo = (bb.min.y - SNAP).ceil() as i64;
    let y_hi = (bb.max.y + SNAP).floor() as i64;
    let mut out = Vec::with_capacity((y_hi - y_lo + 1).max(0) as usize);
    for y in y_lo..=y_hi {
        let yf = y as f64;
        let mut xl = f64::INFINITY;
        let mut xr = f64::NEG_INFINITY;
        for (a, b) in p.edges() {
            let (ylo, yhi) = if a.y <= b.y { (a.y, b.y) } else { (b.y, a.y) };
            if yf < ylo - SNAP || yf > yhi + SNAP {
                continue;
            }
            let dy = b.y - a.y;
            if dy.abs() <= SNAP {
                xl = xl.min(a.x.min(b.x));
                xr = xr.max(a.x.max(b.x));
            } else {
                let t = ((yf - a.y) / dy).clamp(0.0, 1.0);
                let x = a.x + t * (b.x - a.x);
                xl = xl.min(x);
                xr = xr.max(x);
            }
        }
        if xl > xr {
            continue;
        }
        let x0 = (xl - SNAP).ceil() as i64;
        let x1 = (xr + SNAP).floor() as i64;
        if x0 <= x1 {
            out.push(RowSpan { y, x0, x1 });
        }
    }
    out
}

/// Number of integer points in the closed polygon; boundary points count.
pub fn count_points(p: &ConvexPolygon) -> u64 {
    row_spans(p).iter().map(RowSpan::len).sum()
}

/// Row spans of a union of convex polygons, merged per row.
pub fn union_row_spans(polys: &[ConvexPolygon]) -> Vec<RowSpan> {
    let mut rows: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for p in polys {
        for s in row_spans(p) {
            rows.entry(s.y).or_default().push((s.x0, s.x1));
        }
    }
    let mut out = Vec::new();
    for (y, mut iv) in rows {
        iv.sort_unstable();
        let (mut cs, mut ce) = iv[0];
        for &(s, e) in &iv[1..] {
            if s > ce + 1 {
                out.push(RowSpan { y, x0: cs, x1: ce });
                cs = s;
                ce = e;
            } else {
                ce = ce.max(e);
            }
        }
        out.push(RowSpan { y, x0: cs, x1: ce });
    }
    out
}

/// Integer points in the union of the polygons (each counted once).
pub fn count_points_union(polys: &[ConvexPolygon]) -> u64 {
    union_row_spans(polys).iter().map(RowSpan::len).sum()
}

/// A finite set of lattice points, stored row-major (by `y`, then `x`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatticeSet {
    points: Vec<(i64, i64)>,
    window: Option<IntBox>,
}

impl LatticeSet {
    /// Builds a set from arbitrary points; duplicates are merged.
    pub fn from_points(mut pts: Vec<(i64, i64)>) -> Self {
        pts.sort_unstable_by_key(|&(x, y)| (y, x));
        pts.dedup();
        let window = bounding_box(&pts);
        Self {
            points: pts,
            window,
        }
    }

    /// Builds a set from row spans that are sorted and pairwise disjoint.
    pub fn from_spans(spans: &[RowSpan]) -> Self {
        let mut pts = Vec::with_capacity(spans.iter().map(|s| s.len() as usize).sum());
        for s in spans {
            pts.extend((s.x0..=s.x1).map(|x| (x, s.y)));
        }
        Self::from_points(pts)
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    /// Smallest box holding every point; `None` for the empty set.
    pub fn window(&self) -> Option<IntBox> {
        self.window
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.points
            .binary_search_by_key(&(y, x), |&(px, py)| (py, px))
            .is_ok()
    }

    /// Symmetric difference size `#(self Δ other)`.
    pub fn symmetric_difference_len(&self, other: &LatticeSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let key = |p: &(i64, i64)| (p.1, p.0);
        while i < self.points.len() && j < other.points.len() {
            match key(&self.points[i]).cmp(&key(&other.points[j])) {
                std::cmp::Ordering::Less => {
                    n += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    n += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        n + (self.points.len() - i) + (other.points.len() - j)
    }

    pub fn shift(&self, dx: i64, dy: i64) -> LatticeSet {
        LatticeSet {
            points: self.points.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
            window: self.window.map(|w| w.shift(dx, dy)),
        }
    }
}

fn bounding_box(pts: &[(i64, i64)]) -> Option<IntBox> {
    let &(x, y) = pts.first()?;
    let mut b = IntBox::new(x, x, y, y);
    for &(x, y) in pts {
        b.x0 = b.x0.min(x);
        b.x1 = b.x1.max(x);
        b.y0 = b.y0.min(y);
        b.y1 = b.y1.max(y);
    }
    Some(b)
}

/// Lattice points of a closed convex polygon.
pub fn enumerate_points(p: &ConvexPolygon) -> LatticeSet {
    LatticeSet::from_spans(&row_spans(p))
}

/// Lattice points of a union of convex polygons.
pub fn enumerate_union(polys: &[ConvexPolygon]) -> LatticeSet {
    LatticeSet::from_spans(&union_row_spans(polys))
}

/// Lattice points of a closed tilted rectangle.
pub fn rect_points(r: &TiltedRect) -> LatticeSet {
    enumerate_points(&r.to_polygon())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub delta: f64,
    pub count: u64,
    pub area: f64,
    pub ratio: f64,
}

/// Lower and upper envelope for `count / area` at large scales.
pub const DENSITY_ENVELOPE: (f64, f64) = (0.5, 1.5);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityScan {
    pub samples: Vec<DensitySample>,
    /// Least sampled scale from which every later sample sits in the envelope.
    pub delta0: Option<f64>,
}

/// Ratio `#(δE ∩ Z²) / |δE|` along the given scales.
pub fn check_density_ratio(p: &ConvexPolygon, deltas: &[f64]) -> Result<DensityScan> {
    let mut samples = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let scaled = p.scale(delta)?;
        let count = count_points(&scaled);
        let area = scaled.area();
        samples.push(DensitySample {
            delta,
            count,
            area,
            ratio: count as f64 / area,
        });
    }
    let (lo, hi) = DENSITY_ENVELOPE;
    let mut delta0 = None;
    for s in samples.iter().rev() {
        if s.ratio >= lo && s.ratio <= hi {
            delta0 = Some(s.delta);
        } else {
            break;
        }
    }
    Ok(DensityScan { samples, delta0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessRatio {
    pub count: u64,
    pub area: f64,
    pub ratio: f64,
    /// `[(l−2√2)(L−2√2)/(lL), (l+2√2)(L+2√2)/(lL)]`, only when `l > 2√2`.
    pub sandwich: Option<(f64, f64)>,
}

impl ProcessRatio {
    /// `true` when no sandwich applies.
    pub fn within_sandwich(&self) -> bool {
        self.sandwich
            .is_none_or(|(lo, hi)| self.ratio >= lo && self.ratio <= hi)
    }
}

pub fn check_process_ratio(r: &TiltedRect) -> ProcessRatio {
    let count = count_points(&r.to_polygon());
    let area = r.area();
    let (l, big_l) = (r.short_side(), r.long_side());
    let pad = 2.0 * std::f64::consts::SQRT_2;
    let sandwich = (l > pad).then(|| {
        (
            (l - pad) * (big_l - pad) / (l * big_l),
            (l + pad) * (big_l + pad) / (l * big_l),
        )
    });
    ProcessRatio {
        count,
        area,
        ratio: count as f64 / area,
        sandwich,
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
