use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{DirectionSpec, ExperimentConfig, GoodParams};
use super::report::{num, ExperimentReport, Source, Table, Verdict};
use crate::directions::{DirectionSet, LACUNARY_POLICY};
use crate::discrete_maximal::{maximal_indicator, witness_sup, RectFamily};
use crate::error::{Error, Result};
use crate::geometry::{Point2, TiltedRect};
use crate::lattice::{IntBox, LatticeSet};

/// Default levels: `2^{-j}`, `j = 0..=12`.
pub fn default_levels() -> Vec<f64> {
    (0..=12).map(|j| 0.5f64.powi(j)).collect()
}

/// Size of one random rectangle, shared by the lacunary and contrast runs.
#[derive(Debug, Clone, Copy)]
struct Shape {
    short: f64,
    aspect: f64,
    pick: f64,
}

fn draw_shapes(g: &GoodParams, rng: &mut ChaCha8Rng) -> Vec<Shape> {
    let (lo, hi) = (g.aspect.0.ln(), g.aspect.1.ln());
    (0..g.rect_count)
        .map(|_| Shape {
            short: g.short_sides[rng.gen_range(0..g.short_sides.len())],
            aspect: if hi > lo { rng.gen_range(lo..hi).exp() } else { g.aspect.0 },
            pick: rng.gen(),
        })
        .collect()
}

/// Rectangles centred at the origin whose long side has a slope from `d`.
fn family(d: &DirectionSet, shapes: &[Shape]) -> Result<RectFamily> {
    let slopes = d.slopes();
    let rects = shapes
        .iter()
        .map(|s| {
            let i = ((s.pick * slopes.len() as f64) as usize).min(slopes.len() - 1);
            let half = 0.5 * s.short;
            TiltedRect::new(Point2::ORIGIN, half * s.aspect, half, slopes[i].atan())
        })
        .collect::<Result<Vec<_>>>()?;
    RectFamily::new(rects)
}

/// `m` distinct points in a square of side `⌈√(m/density)⌉` at the origin.
pub fn random_indicator(m: usize, density: f64, rng: &mut impl Rng) -> LatticeSet {
    let side = ((m as f64 / density).sqrt().ceil() as usize).max(1);
    let side = side.max((m as f64).sqrt().ceil() as usize);
    let idx = sample(rng, side * side, m);
    LatticeSet::from_points(
        idx.into_iter()
            .map(|i| ((i % side) as i64, (i / side) as i64))
            .collect(),
    )
}

/// `witness[p][size]`: max over replicates of the sup over levels.
struct Sweep {
    witness: Vec<Vec<f64>>,
    rows: Vec<(usize, usize, f64, f64, f64, u64)>,
}

fn sweep(fam: &RectFamily, cfg: &ExperimentConfig, ps: &[f64], levels: &[f64], seed: u64) -> Result<Sweep> {
    let g = &cfg.good;
    let mut witness = vec![vec![0.0f64; g.supports.len()]; ps.len()];
    let mut rows = Vec::new();
    for (si, &m) in g.supports.iter().enumerate() {
        for rep in 0..g.replicates {
            // same inputs for both families
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((si as u64) << 32 | rep as u64));
            let set = random_indicator(m, g.density, &mut rng);
            let w: IntBox = set.window().ok_or(Error::EmptySet("random indicator"))?;
            let image = maximal_indicator(&set, fam, fam.hull(w))?;
            for (pi, &p) in ps.iter().enumerate() {
                let (wv, l) = witness_sup(&image, m as f64, levels, p)?;
                witness[pi][si] = witness[pi][si].max(wv);
                let count = image.values().iter().filter(|&&v| v >= l).count() as u64;
                rows.push((m, rep, p, wv, l, count));
            }
        }
    }
    Ok(Sweep { witness, rows })
}

/// Weak-type witnesses of a lacunary family over growing indicator supports,
/// against a non-lacunary family of the same rectangle sizes.
pub fn run_good_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let d = cfg
        .directions_or(DirectionSpec::Lacunary { lambda: 0.5, count: 12 })
        .build()?;
    let lac = crate::directions::is_lacunary(&d.slopes());
    if !(lac.lacunary && lac.lambda <= LACUNARY_POLICY) {
        return Err(Error::Refused(format!(
            "directions {} have slope ratio {:.6} above the lacunary policy {LACUNARY_POLICY}; \
             non-lacunary sets belong to the bad experiment",
            d.label, lac.lambda
        )));
    }
    let g = &cfg.good;
    let contrast = g.contrast.build()?;
    let ps = cfg.p_or_default();
    let levels = cfg.lambdas.clone().unwrap_or_else(default_levels);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shapes = draw_shapes(g, &mut rng);
    let good_fam = family(&d, &shapes)?;
    let bad_fam = family(&contrast, &shapes)?;
    let input_seed: u64 = rng.gen();
    let good = sweep(&good_fam, cfg, &ps, &levels, input_seed)?;
    let bad = sweep(&bad_fam, cfg, &ps, &levels, input_seed)?;

    let mut report = ExperimentReport::new("good", cfg);
    report.provenance("lacunary_ratio", lac.lambda, Source::Measured, &d.label);
    report.provenance("lacunary_policy", LACUNARY_POLICY, Source::Convention, "slope ratio at or below this counts as lacunary");
    report.provenance("max_spread", g.max_spread, Source::Convention, "max/min of the per-size witness");
    report.provenance("witness", "sup over levels of lambda^p #{A* chi_E >= lambda} / #E, max over replicates", Source::Convention, "");

    let mut table = Table::new("good", 7, &["family", "p", "support", "replicate", "witness", "argmax_lambda", "superlevel_count"]);
    let mut summary = Table::new("good_summary", 7, &["p", "lacunary_max", "lacunary_min", "spread", "contrast_max", "contrast_larger"]);
    for (name, s) in [("lacunary", &good), ("contrast", &bad)] {
        for &(m, rep, p, wv, l, c) in &s.rows {
            table.push(vec![name.into(), num(p), m.into(), rep.into(), num(wv), num(l), c.into()]);
        }
    }
    let mut pass = true;
    let mut detail = Vec::new();
    for (pi, &p) in ps.iter().enumerate() {
        let w = &good.witness[pi];
        let max = w.iter().copied().fold(0.0, f64::max);
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = max / min;
        let cmax = bad.witness[pi].iter().copied().fold(0.0, f64::max);
        let ok = spread <= g.max_spread && cmax > max;
        pass &= ok;
        summary.push(vec![num(p), num(max), num(min), num(spread), num(cmax), (cmax > max).into()]);
        detail.push(format!("p = {p}: spread {spread:.3} (limit {}), max {max:.4} vs contrast {cmax:.4}", g.max_spread));
    }
    report.verdicts.push(Verdict::new(7, pass, detail.join("; ")));
    report.tables.push(table);
    report.tables.push(summary);
    Ok(report)
}
