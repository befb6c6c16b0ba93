//! Dyadic blocks of the triangles `Δ_k = (0,1), (u_{k−1},0), (u_k,0)`,
//! horizontal translations compressing their union, and the lattice scale at
//! which the compression survives counting.
//!
//! Translations are found by a recursive pairwise merge (slide the right unit
//! left to minimise the pair's union area) optionally followed by a cyclic
//! coordinate search. The achieved compression `ε_n` is measured, never
//! assumed.
//!
//! Each `Δ_k` is carried to the frame of [`crate::triangle_cover`] by swapping
//! coordinates: apex `(0,1) ↦ A = (1,0)`, `B_{k−1} ↦ B = (0,u_{k−1})`,
//! `B_k ↦ C = (0,u_k)`. With this labelling `|AB| >= √c·|BC|` is exactly
//! condition (i), and `P_k` lies along `AB_k`, so its slope is `1/u_k`. The
//! swap is an isometry fixing `Z²`; trapezia, rectangles and lattice counts
//! transfer back unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::directions::DirectionSet;
use crate::error::{invalid, Error, Result};
use crate::geometry::{union_area, ConvexPolygon, Point2, TiltedRect};
use crate::lattice::{count_points_union};
use crate::triangle_cover::{discrete_overlap_ratio, Construction1};

/// Apex shared by every `Δ_k`.
pub const APEX: Point2 = Point2::new(0.0, 1.0);

/// `V^n` must cover at least this fraction of `|∪Δ_k|`.
pub const SIMILAR_COPY_FRACTION: f64 = 1.0 / 9.0;

/// Uniform samples per trapezium used by the discrete overlap criterion.
pub const TRAPEZIUM_SAMPLES: usize = 50;

/// Index range `2ⁿ ..= 2ⁿ⁺¹ − 1` of block `n`.
pub fn block_indices(n: u32) -> std::ops::RangeInclusive<usize> {
    (1usize << n)..=((1usize << (n + 1)) - 1)
}

/// The `2ⁿ` triangles of block `n`, untranslated.
pub fn build_triangles(d: &DirectionSet, n: u32) -> Result<Vec<ConvexPolygon>> {
    let range = block_indices(n);
    let last = *range.end();
    if last > d.max_index() {
        return Err(Error::TooFewDirections {
            required: last,
            available: d.max_index(),
        });
    }
    let u = d.u();
    range
        .map(|k| {
            ConvexPolygon::triangle(
                APEX,
                Point2::new(u[k - 1], 0.0),
                Point2::new(u[k], 0.0),
            )
        })
        .collect()
}

/// How the right unit of a pair is slid onto the left one.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "h")]
pub enum SlideRule {
    /// Minimise the union area of the pair over the slide.
    #[default]
    Minimize,
    /// Classical heart-ratio slide: the outer edges of the pair meet at
    /// height fraction `h` of the apex height, i.e. slide by
    /// `2(1−h)·(left unit base width)`.
    HeartRatio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationMethod {
    PairwiseBisection,
    /// Pairwise bisection followed by cyclic 1-D refinement of every `τ_k`.
    CoordinateSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: TranslationMethod,
    #[serde(default)]
    pub slide: SlideRule,
    /// Coordinate search stops once a full cycle improves less than this
    /// (relative).
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Grid points of the coarse scan preceding each golden-section search.
    #[serde(default = "default_coarse")]
    pub coarse_steps: usize,
}

fn default_rel_tol() -> f64 {
    1e-4
}

fn default_coarse() -> usize {
    48
}

impl OptimizerConfig {
    pub fn new(method: TranslationMethod) -> Self {
        Self {
            method,
            slide: SlideRule::Minimize,
            rel_tol: default_rel_tol(),
            coarse_steps: default_coarse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Translations {
    /// Horizontal offsets, `taus[0] = 0`.
    pub taus: Vec<f64>,
    /// `|∪ τ_kΔ_k| / |∪ Δ_k|`.
    pub epsilon: f64,
}

pub fn translate_all(polys: &[ConvexPolygon], taus: &[f64]) -> Vec<ConvexPolygon> {
    polys
        .iter()
        .zip(taus)
        .map(|(p, &t)| p.translate(Point2::new(t, 0.0)))
        .collect()
}

fn translated_union(polys: &[ConvexPolygon], taus: &[f64]) -> f64 {
    union_area(&translate_all(polys, taus))
}

/// Minimiser of `f` on `[lo, hi]`: coarse scan, then golden section around
/// the best grid point.
fn minimize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, coarse: usize) -> (f64, f64) {
    let steps = coarse.max(2);
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f(lo));
    for i in 1..=steps {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let tol = 1e-10 * (hi - lo).abs().max(1.0);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if v < best.1 {
        (x, v)
    } else {
        best
    }
}

fn span_x(polys: &[ConvexPolygon], taus: &[f64]) -> (f64, f64) {
    polys.iter().zip(taus).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (p, t)| {
        let b = p.bbox();
        (lo.min(b.min.x + t), hi.max(b.max.x + t))
    })
}

/// x-range of the vertices on the lowest horizontal line.
fn base_span(polys: &[ConvexPolygon]) -> (f64, f64) {
    let y = polys
        .iter()
        .flat_map(|p| p.vertices().iter().map(|v| v.y))
        .fold(f64::INFINITY, f64::min);
    polys
        .iter()
        .flat_map(|p| p.vertices().iter())
        .filter(|v| v.y <= y + 1e-12)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.x), hi.max(v.x)))
}

fn pairwise_bisection(polys: &[ConvexPolygon], cfg: &OptimizerConfig) -> Vec<f64> {
    let mut taus = vec![0.0; polys.len()];
    // units are contiguous index ranges
    let mut units: Vec<std::ops::Range<usize>> = (0..polys.len()).map(|i| i..i + 1).collect();
    while units.len() > 1 {
        let mut merged = Vec::with_capacity(units.len().div_ceil(2));
        for pair in units.chunks(2) {
            if pair.len() == 1 {
                merged.push(pair[0].clone());
                continue;
            }
            let (l, r) = (pair[0].clone(), pair[1].clone());
            let all = l.start..r.end;
            let (llo, _) = span_x(&polys[l.clone()], &taus[l.clone()]);
            let (rlo, rhi) = span_x(&polys[r.clone()], &taus[r.clone()]);
            let slide = match cfg.slide {
                SlideRule::HeartRatio(h) => {
                    let (b0, b1) = base_span(&polys[l.clone()]);
                    2.0 * (1.0 - h) * (b1 - b0)
                }
                SlideRule::Minimize => {
                    let sub = &polys[all.clone()];
                    let base: Vec<f64> = taus[all.clone()].to_vec();
                    let nl = l.len();
                    let f = |t: f64| {
                        let mut tt = base.clone();
                        for v in &mut tt[nl..] {
                            *v -= t;
                        }
                        translated_union(sub, &tt)
                    };
                    let max_slide = (rhi - llo).max(rhi - rlo);
                    minimize_1d(f, 0.0, max_slide, cfg.coarse_steps).0
                }
            };
            for t in &mut taus[r.clone()] {
                *t -= slide;
            }
            merged.push(all);
        }
        units = merged;
    }
    taus
}

fn coordinate_search(polys: &[ConvexPolygon], mut taus: Vec<f64>, cfg: &OptimizerConfig) -> Vec<f64> {
    let (lo, hi) = span_x(polys, &vec![0.0; polys.len()]);
    let width = (hi - lo) / polys.len() as f64;
    let mut current = translated_union(polys, &taus);
    for _cycle in 0..200 {
        let start = current;
        for k in 1..polys.len() {
            let base = taus.clone();
            let f = |t: f64| {
                let mut tt = base.clone();
                tt[k] = t;
                translated_union(polys, &tt)
            };
            let (t, v) = minimize_1d(f, taus[k] - 2.0 * width, taus[k] + 2.0 * width, cfg.coarse_steps);
            if v < current {
                taus[k] = t;
                current = v;
            }
        }
        if start - current < cfg.rel_tol * start {
            break;
        }
    }
    taus
}

/// Horizontal translations compressing the union of `triangles`.
pub fn optimize_translations(triangles: &[ConvexPolygon], cfg: &OptimizerConfig) -> Result<Translations> {
    if triangles.is_empty() {
        return Err(invalid("triangles", "need at least one triangle"));
    }
    let original = union_area(triangles);
    let mut taus = pairwise_bisection(triangles, cfg);
    if cfg.method == TranslationMethod::CoordinateSearch {
        taus = coordinate_search(triangles, taus, cfg);
    }
    let epsilon = (translated_union(triangles, &taus) / original).min(1.0);
    Ok(Translations { taus, epsilon })
}

/// One dyadic block with its translations, trapezia and rectangles.
#[derive(Debug, Clone, Serialize)]
pub struct PerronBlock {
    pub n: u32,
    pub first_index: usize,
    /// Untranslated `Δ_k`.
    pub triangles: Vec<ConvexPolygon>,
    pub taus: Vec<f64>,
    pub epsilon: f64,
    /// Untranslated trapezia `V_k`.
    pub trapezia: Vec<ConvexPolygon>,
    /// Untranslated enlarged triangles `AB′C′` of each `Δ_k`.
    pub enlarged: Vec<ConvexPolygon>,
    /// Rectangles `P_k`, centred at the origin.
    pub rects: Vec<TiltedRect>,
    /// Each `Δ_k` in the swapped frame.
    #[serde(skip)]
    pub normal_forms: Vec<Construction1>,
    pub condition_i: f64,
    pub delta: Option<f64>,
}

impl PerronBlock {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// `K^n = ∪ τ_kΔ_k` as members.
    pub fn k_members(&self) -> Vec<ConvexPolygon> {
        translate_all(&self.triangles, &self.taus)
    }

    /// `V^n = ∪ τ_kV_k` as members.
    pub fn v_members(&self) -> Vec<ConvexPolygon> {
        translate_all(&self.trapezia, &self.taus)
    }

    /// `|∪Δ_k|`.
    pub fn original_area(&self) -> f64 {
        union_area(&self.triangles)
    }

    pub fn k_area(&self) -> f64 {
        union_area(&self.k_members())
    }

    pub fn v_area(&self) -> f64 {
        union_area(&self.v_members())
    }

    /// `|V^n| >= |∪Δ_k| / 9`.
    pub fn similar_copy_holds(&self) -> bool {
        self.v_area() >= SIMILAR_COPY_FRACTION * self.original_area()
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }
}

/// Builds block `n`: triangles, translations, trapezia and rectangles.
pub fn assemble_block(d: &DirectionSet, n: u32, cfg: &OptimizerConfig) -> Result<PerronBlock> {
    let triangles = build_triangles(d, n)?;
    let range = block_indices(n);
    let condition_i = d.condition_i_constant(*range.end())?;
    if !(condition_i > 0.0) || !condition_i.is_finite() {
        return Err(Error::ConditionIFailed(condition_i));
    }
    let tr = optimize_translations(&triangles, cfg)?;
    let u = d.u();
    let mut normal_forms = Vec::with_capacity(triangles.len());
    let mut trapezia = Vec::with_capacity(triangles.len());
    let mut enlarged = Vec::with_capacity(triangles.len());
    let mut rects = Vec::with_capacity(triangles.len());
    for k in range.clone() {
        let cons = Construction1::with_far_c(u[k - 1], u[k])?;
        trapezia.push(cons.v.swapped());
        enlarged.push(cons.enlarged_triangle().swapped());
        rects.push(cons.p.swapped());
        normal_forms.push(cons);
    }
    Ok(PerronBlock {
        n,
        first_index: *range.start(),
        triangles,
        taus: tr.taus,
        epsilon: tr.epsilon,
        trapezia,
        enlarged,
        rects,
        normal_forms,
        condition_i,
        delta: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaTrial {
    pub delta: f64,
    /// `#(δK^n ∩ Z²) / #(δ∪Δ_k ∩ Z²)`.
    pub compression: f64,
    /// Worst per-triangle discrete overlap ratio divided by its threshold.
    pub overlap_margin: f64,
    /// `#(δV^n ∩ Z²) / #(δ∪Δ_k ∩ Z²)`.
    pub v_fraction: f64,
    pub pass_compression: bool,
    pub pass_overlap: bool,
    pub pass_v_fraction: bool,
}

impl DeltaTrial {
    pub fn passes(&self) -> bool {
        self.pass_compression && self.pass_overlap && self.pass_v_fraction
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSelection {
    pub delta: Option<f64>,
    pub trace: Vec<DeltaTrial>,
}

/// Lattice counts of one block at scale `delta` against the three
/// requirements: compression within `3ε_n`, every trapezium overlap above
/// its discrete threshold, and `V^n` holding `1/18` of the points of `∪Δ_k`.
pub fn evaluate_delta(block: &PerronBlock, delta: f64, seed: u64) -> Result<DeltaTrial> {
    let scale = |ps: Vec<ConvexPolygon>| -> Result<Vec<ConvexPolygon>> {
        ps.iter().map(|p| p.scale(delta)).collect()
    };
    let orig = count_points_union(&scale(block.triangles.clone())?) as f64;
    let k = count_points_union(&scale(block.k_members())?) as f64;
    let v = count_points_union(&scale(block.v_members())?) as f64;
    let compression = if orig > 0.0 { k / orig } else { f64::INFINITY };
    let v_fraction = if orig > 0.0 { v / orig } else { 0.0 };

    let mut margin = f64::INFINITY;
    for (i, cons) in block.normal_forms.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let samples = cons.sample_trapezium(TRAPEZIUM_SAMPLES, &mut rng);
        let worst = discrete_overlap_ratio(cons, &samples, delta)?;
        margin = margin.min(worst / cons.discrete_threshold());
    }
    Ok(DeltaTrial {
        delta,
        compression,
        overlap_margin: margin,
        v_fraction,
        pass_compression: compression <= 3.0 * block.epsilon,
        pass_overlap: margin >= 1.0,
        pass_v_fraction: v_fraction >= 0.5 * SIMILAR_COPY_FRACTION,
    })
}

/// Smallest scale on `delta_grid` meeting every requirement of
/// [`evaluate_delta`]. `delta` is `None` when the grid is exhausted.
pub fn select_delta(block: &PerronBlock, delta_grid: &[f64], seed: u64) -> Result<DeltaSelection> {
    let mut trace = Vec::new();
    for &d in delta_grid {
        let trial = evaluate_delta(block, d, seed)?;
        trace.push(trial);
        if trial.passes() {
            return Ok(DeltaSelection {
                delta: Some(d),
                trace,
            });
        }
    }
    Ok(DeltaSelection { delta: None, trace })
}
