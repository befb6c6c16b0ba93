//! Averages over translated lattice rectangles and their finite maximal
//! operator on `Z²`, superlevel counts, Tauberian and weak-`(p,p)` witnesses.
//!
//! Every sum runs over a rectangle's cached offsets in row-major order, so a
//! value never depends on how the evaluation window is split across threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexPolygon, TiltedRect};
use crate::lattice::{count_points_union, enumerate_union, rect_points, row_spans, IntBox, LatticeSet, RowSpan};
use crate::perron_tree::PerronBlock;

/// Real values on an integer box, zero outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    window: IntBox,
    values: Vec<f64>,
}

impl GridFunction {
    /// Row-major values (`y` outer, `x` inner) over `window`.
    pub fn new(window: IntBox, values: Vec<f64>) -> Result<Self> {
        if window.is_empty() {
            return Err(invalid("window", "must be non-empty"));
        }
        if values.len() != window.len() {
            return Err(invalid(
                "values",
                format!("expected {} values, got {}", window.len(), values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { window, values })
    }

    pub fn zeros(window: IntBox) -> Self {
        Self {
            window,
            values: vec![0.0; window.len()],
        }
    }

    pub fn from_fn(window: IntBox, f: impl Fn(i64, i64) -> f64) -> Self {
        let mut values = Vec::with_capacity(window.len());
        for y in window.y0..=window.y1 {
            for x in window.x0..=window.x1 {
                values.push(f(x, y));
            }
        }
        Self { window, values }
    }

    /// `χ_E` on the bounding box of `E`.
    pub fn indicator(set: &LatticeSet) -> Result<Self> {
        let window = set.window().ok_or(Error::EmptySet("E"))?;
        let mut g = Self::zeros(window);
        for &(x, y) in set.points() {
            let i = g.index(x, y).expect("point inside its own window");
            g.values[i] = 1.0;
        }
        Ok(g)
    }

    pub fn window(&self) -> IntBox {
        self.window
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let w = &self.window;
        if x < w.x0 || x > w.x1 || y < w.y0 || y > w.y1 {
            return None;
        }
        Some((y - w.y0) as usize * w.width() + (x - w.x0) as usize)
    }

    #[inline]
    pub fn get(&self, x: i64, y: i64) -> f64 {
        self.index(x, y).map_or(0.0, |i| self.values[i])
    }

    pub fn abs(&self) -> Self {
        Self {
            window: self.window,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            window: self.window,
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// Same values, moved by `(dx, dy)`.
    pub fn shift(&self, dx: i64, dy: i64) -> Self {
        Self {
            window: self.window.shift(dx, dy),
            values: self.values.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `‖φ‖_p^p`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(p)).sum()
    }

    /// Points where the function is non-zero.
    pub fn support(&self) -> LatticeSet {
        let w = self.window;
        let pts = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| {
                let (r, c) = (i / w.width(), i % w.width());
                (w.x0 + c as i64, w.y0 + r as i64)
            })
            .collect();
        LatticeSet::from_points(pts)
    }

    /// The set `E` when the function is `χ_E`.
    pub fn as_indicator(&self) -> Option<LatticeSet> {
        self.values
            .iter()
            .all(|&v| v == 0.0 || v == 1.0)
            .then(|| self.support())
    }
}

#[derive(Debug, Clone)]
struct Member {
    rect: TiltedRect,
    offsets: Vec<(i64, i64)>,
    spans: Vec<RowSpan>,
    bounds: IntBox,
}

/// Finite family of rectangles containing the origin, with their lattice
/// offsets cached.
#[derive(Debug, Clone)]
pub struct RectFamily {
    members: Vec<Member>,
}

impl RectFamily {
    pub fn new(rects: Vec<TiltedRect>) -> Result<Self> {
        if rects.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let members = rects
            .into_iter()
            .map(|rect| {
                if !rect.contains(crate::geometry::Point2::ORIGIN) {
                    return Err(Error::RectMissesOrigin);
                }
                let spans = row_spans(&rect.to_polygon());
                let set = LatticeSet::from_spans(&spans);
                let bounds = set.window().ok_or(Error::EmptyLatticeSet)?;
                Ok(Member {
                    rect,
                    offsets: set.points().to_vec(),
                    spans,
                    bounds,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rects(&self) -> Vec<TiltedRect> {
        self.members.iter().map(|m| m.rect).collect()
    }

    /// Row-major lattice offsets `R_i ∩ Z²`.
    pub fn offsets(&self, i: usize) -> &[(i64, i64)] {
        &self.members[i].offsets
    }

    /// Shortest side `l(R_i)` of each member.
    pub fn short_sides(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.rect.short_side()).collect()
    }

    /// Box holding every offset of every member.
    pub fn offset_box(&self) -> IntBox {
        self.members
            .iter()
            .map(|m| m.bounds)
            .reduce(|a, b| a.union(&b))
            .expect("family is non-empty")
    }

    /// Members of both families, `self` first.
    pub fn union(&self, other: &RectFamily) -> RectFamily {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        RectFamily { members }
    }

    /// Centres `y` whose translate `y + R` can meet `support`, padded by one.
    pub fn hull(&self, support: IntBox) -> IntBox {
        let o = self.offset_box();
        IntBox::new(support.x0 - o.x1, support.x1 - o.x0, support.y0 - o.y1, support.y1 - o.y0).pad(1)
    }
}

/// Mean of `φ` over `at + (r ∩ Z²)`.
pub fn average(phi: &GridFunction, r: &TiltedRect, at: (i64, i64)) -> Result<f64> {
    let set = rect_points(r);
    if set.is_empty() {
        return Err(Error::EmptyLatticeSet);
    }
    Ok(offset_sum(phi, set.points(), at, false) / set.len() as f64)
}

#[inline]
fn offset_sum(phi: &GridFunction, offsets: &[(i64, i64)], at: (i64, i64), abs: bool) -> f64 {
    let mut s = 0.0;
    for &(i, j) in offsets {
        let v = phi.get(at.0 + i, at.1 + j);
        s += if abs { v.abs() } else { v };
    }
    s
}

fn par_image(window: IntBox, f: impl Fn(i64, i64) -> f64 + Sync) -> GridFunction {
    let w = window.width();
    let mut values = vec![0.0; window.len()];
    values.par_chunks_mut(w).enumerate().for_each(|(r, row)| {
        let y = window.y0 + r as i64;
        for (c, v) in row.iter_mut().enumerate() {
            *v = f(window.x0 + c as i64, y);
        }
    });
    GridFunction { window, values }
}

/// `A*φ = max_R A_R|φ|` on `eval_window`.
pub fn maximal(phi: &GridFunction, fam: &RectFamily, eval_window: IntBox) -> GridFunction {
    par_image(eval_window, |x, y| {
        let mut best = 0.0f64;
        for m in &fam.members {
            let v = offset_sum(phi, &m.offsets, (x, y), true) / m.offsets.len() as f64;
            if v > best {
                best = v;
            }
        }
        best
    })
}

/// Row prefix sums of an indicator, for `O(rows)` counts over a translated
/// rectangle.
#[derive(Debug, Clone)]
pub struct IndicatorCounter {
    window: IntBox,
    stride: usize,
    prefix: Vec<u32>,
}

impl IndicatorCounter {
    pub fn new(set: &LatticeSet) -> Result<Self> {
        let window = set.window().ok_or(Error::EmptySet("E"))?;
        let stride = window.width() + 1;
        let mut prefix = vec![0u32; stride * window.height()];
        for &(x, y) in set.points() {
            let r = (y - window.y0) as usize;
            prefix[r * stride + (x - window.x0) as usize + 1] = 1;
        }
        for row in prefix.chunks_mut(stride) {
            for i in 1..stride {
                row[i] += row[i - 1];
            }
        }
        Ok(Self {
            window,
            stride,
            prefix,
        })
    }

    /// `#(E ∩ ([x0, x1] × {y}))`.
    #[inline]
    pub fn row_count(&self, y: i64, x0: i64, x1: i64) -> u32 {
        let w = &self.window;
        if y < w.y0 || y > w.y1 {
            return 0;
        }
        let a = (x0.max(w.x0) - w.x0).max(0);
        let b = (x1.min(w.x1) - w.x0 + 1).min(self.stride as i64 - 1);
        if b <= a {
            return 0;
        }
        let row = &self.prefix[(y - w.y0) as usize * self.stride..];
        row[b as usize] - row[a as usize]
    }

    /// `#(E ∩ (at + R))` for `R` given by its row spans.
    #[inline]
    pub fn count(&self, spans: &[RowSpan], at: (i64, i64)) -> u64 {
        spans
            .iter()
            .map(|s| self.row_count(at.1 + s.y, at.0 + s.x0, at.0 + s.x1) as u64)
            .sum()
    }

    fn disjoint(&self, b: IntBox, at: (i64, i64)) -> bool {
        let w = &self.window;
        at.0 + b.x1 < w.x0 || at.0 + b.x0 > w.x1 || at.1 + b.y1 < w.y0 || at.1 + b.y0 > w.y1
    }

    /// `max_R #(E ∩ (at + R)) / #(R ∩ Z²)`.
    pub fn maximal_at(&self, fam: &RectFamily, at: (i64, i64)) -> f64 {
        let mut best = 0.0f64;
        for m in &fam.members {
            if self.disjoint(m.bounds, at) {
                continue;
            }
            let v = self.count(&m.spans, at) as f64 / m.offsets.len() as f64;
            if v > best {
                best = v;
            }
        }
        best
    }
}

/// `A*χ_E` on `eval_window` through row prefix sums. Agrees exactly with
/// [`maximal`] applied to `χ_E`.
pub fn maximal_indicator(set: &LatticeSet, fam: &RectFamily, eval_window: IntBox) -> Result<GridFunction> {
    let counter = IndicatorCounter::new(set)?;
    Ok(par_image(eval_window, |x, y| counter.maximal_at(fam, (x, y))))
}

/// `A*|φ|` on the window outside which it vanishes, using the indicator path
/// when `φ` only takes the values 0 and 1.
pub fn maximal_full(phi: &GridFunction, fam: &RectFamily) -> Result<GridFunction> {
    let support = phi.support();
    let sw = support.window().ok_or(Error::EmptySet("support of φ"))?;
    let window = fam.hull(sw);
    match phi.as_indicator() {
        Some(set) => maximal_indicator(&set, fam, window),
        None => Ok(maximal(phi, fam, window)),
    }
}

/// `#{g >= λ}` over the window of `g`.
pub fn superlevel_count(g: &GridFunction, lambda: f64) -> Result<u64> {
    if !(lambda > 0.0) {
        return Err(invalid("lambda", "must be positive"));
    }
    Ok(g.values.iter().filter(|&&v| v >= lambda).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauberianRatio {
    pub lambda: f64,
    pub superlevel_count: u64,
    pub e_count: u64,
    pub ratio: f64,
}

/// `#{A*χ_E >= λ} / #E`, evaluated on the hull of `E` under the family.
pub fn tauberian_ratio(set: &LatticeSet, fam: &RectFamily, lambda: f64) -> Result<TauberianRatio> {
    let w = set.window().ok_or(Error::EmptySet("E"))?;
    let image = maximal_indicator(set, fam, fam.hull(w))?;
    tauberian_from_image(&image, set.len() as u64, lambda)
}

/// Tauberian ratio read off a precomputed `A*χ_E` covering the hull.
pub fn tauberian_from_image(image: &GridFunction, e_count: u64, lambda: f64) -> Result<TauberianRatio> {
    let c = superlevel_count(image, lambda)?;
    Ok(TauberianRatio {
        lambda,
        superlevel_count: c,
        e_count,
        ratio: c as f64 / e_count as f64,
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid("p", format!("must lie in [1, ∞), got {p}")));
    }
    Ok(())
}

/// `λ^p · #{A*φ >= λ} / ‖φ‖_p^p`.
pub fn weak_p_witness(phi: &GridFunction, fam: &RectFamily, lambda: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if phi.is_zero() {
        return Err(invalid("phi", "must not vanish identically"));
    }
    let image = maximal_full(phi, fam)?;
    witness_from_image(&image, phi.lp_norm_pow(p), lambda, p)
}

/// Weak-type witness from a precomputed `A*φ` and `‖φ‖_p^p`.
pub fn witness_from_image(image: &GridFunction, norm_pow: f64, lambda: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    let c = superlevel_count(image, lambda)?;
    Ok(lambda.powf(p) * c as f64 / norm_pow)
}

/// Largest witness over a list of levels, with the level attaining it.
pub fn witness_sup(image: &GridFunction, norm_pow: f64, lambdas: &[f64], p: f64) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::NAN);
    for &l in lambdas {
        let w = witness_from_image(image, norm_pow, l, p)?;
        if w > best.0 || best.1.is_nan() {
            best = (w, l);
        }
    }
    Ok(best)
}

/// A Perron block blown up by `δ`: `E = δK^n ∩ Z²`, the points of `δV^n`,
/// the rectangles `δP_k`.
#[derive(Debug, Clone)]
pub struct ScaledBlock {
    pub delta: f64,
    pub e: LatticeSet,
    pub v_points: LatticeSet,
    pub family: RectFamily,
    /// `#(δ∪Δ_k ∩ Z²)`.
    pub original_count: u64,
}

pub fn scale_block(block: &PerronBlock, delta: f64) -> Result<ScaledBlock> {
    let scale = |ps: Vec<ConvexPolygon>| -> Result<Vec<ConvexPolygon>> {
        ps.iter().map(|p| p.scale(delta)).collect()
    };
    let e = enumerate_union(&scale(block.k_members())?);
    let v_points = enumerate_union(&scale(block.v_members())?);
    let original_count = count_points_union(&scale(block.triangles.clone())?);
    let rects = block
        .rects
        .iter()
        .map(|r| r.scale(delta))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledBlock {
        delta,
        e,
        v_points,
        family: RectFamily::new(rects)?,
        original_count,
    })
}

/// `min_{y ∈ δV^n ∩ Z²} max_k A_{δP_k}χ_E(y)`.
pub fn measure_t0(block: &PerronBlock) -> Result<f64> {
    let delta = block.delta.ok_or_else(|| invalid("block", "no lattice scale selected"))?;
    let sb = scale_block(block, delta)?;
    t0_of(&sb)
}

pub fn t0_of(sb: &ScaledBlock) -> Result<f64> {
    if sb.v_points.is_empty() {
        return Err(Error::EmptySet("δV^n ∩ Z²"));
    }
    let counter = IndicatorCounter::new(&sb.e)?;
    let t0 = sb
        .v_points
        .points()
        .par_iter()
        .map(|&p| counter.maximal_at(&sb.family, p))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(t0)
}
