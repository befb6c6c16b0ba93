//! Verification suites for the counting, trapezium and torus components.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::config::ExperimentConfig;
use super::report::{num, ExperimentReport, Figure, Source, Table, Verdict};
use crate::directions::{gen_lacunary, gen_power};
use crate::discrete_maximal::RectFamily;
use crate::ergodic_torus::{coboundary_decay, ergodic_average, transfer_check, ObservedFunction};
use crate::error::Result;
use crate::geometry::{ConvexPolygon, Point2, TiltedRect};
use crate::lattice::{check_density_ratio, check_process_ratio, count_points, DENSITY_ENVELOPE};
use crate::perron_tree::TRAPEZIUM_SAMPLES;
use crate::svg::construction_svg;
use crate::triangle_cover::{discrete_overlap_ratio, discrete_overlap_scale, verify_overlap, Construction1};

/// Tighter envelope required from `δ = 100` on.
pub const TIGHT_ENVELOPE: (f64, f64) = (0.9, 1.1);

/// `#(200·T ∩ Z²)` for the unit right triangle: `201·202/2`.
pub const TRIANGLE_200_COUNT: u64 = 20301;

fn shapes() -> Result<Vec<(&'static str, ConvexPolygon)>> {
    let o = Point2::ORIGIN;
    Ok(vec![
        ("unit_square", ConvexPolygon::axis_rect(0.0, 1.0, 0.0, 1.0)?),
        ("right_triangle", ConvexPolygon::triangle(o, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0))?),
        ("regular_hexagon", ConvexPolygon::regular(o, 1.0, 6, 0.0)?),
        ("tilted_rect", TiltedRect::new(Point2::new(0.1, 0.2), 0.5, 0.25, (1.0f64 / 3.0).atan())?.to_polygon()),
    ])
}

/// Volume/count envelope on fixed shapes and the sandwich on random rectangles.
pub fn run_lattice_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let s = &cfg.suites;
    let mut report = ExperimentReport::new("lattice", cfg);
    report.provenance("density_envelope", format!("{DENSITY_ENVELOPE:?}"), Source::Theory, "count/area for delta >= delta0");
    report.provenance("tight_envelope", format!("{TIGHT_ENVELOPE:?}"), Source::Convention, "required from delta = 100 on");
    report.provenance("triangle_200_count", TRIANGLE_200_COUNT, Source::Measured, "Pick: area + boundary/2 + 1");

    let mut t1 = Table::new("lattice", 1, &["shape", "delta", "count", "area", "ratio", "in_envelope", "in_tight"]);
    let mut bad1 = 0;
    let mut pick = None;
    for (name, p) in shapes()? {
        let scan = check_density_ratio(&p, &s.density_deltas)?;
        for smp in scan.samples {
            let loose = smp.ratio >= DENSITY_ENVELOPE.0 && smp.ratio <= DENSITY_ENVELOPE.1;
            let tight = smp.delta < 100.0 || (smp.ratio >= TIGHT_ENVELOPE.0 && smp.ratio <= TIGHT_ENVELOPE.1);
            bad1 += usize::from(!(loose && tight));
            if name == "right_triangle" && smp.delta == 200.0 {
                pick = Some(smp.count);
            }
            t1.push(vec![name.into(), num(smp.delta), smp.count.into(), num(smp.area), num(smp.ratio), loose.into(), tight.into()]);
        }
    }
    let pick = match pick {
        Some(c) => c,
        None => count_points(&shapes()?[1].1.scale(200.0)?),
    };
    report.verdicts.push(Verdict::new(
        1,
        bad1 == 0 && pick == TRIANGLE_200_COUNT,
        format!("{bad1} envelope violations; right triangle at delta 200 has {pick} points (expected {TRIANGLE_200_COUNT})"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t2 = Table::new("sandwich", 2, &["l", "L", "angle", "count", "area", "ratio", "lower", "upper", "holds"]);
    let mut bad2 = 0;
    for _ in 0..s.random_rects {
        let l = rng.gen_range(2.0 * SQRT_2 + 0.05..40.0);
        let big_l = l * rng.gen_range(1.0f64..8.0);
        let angle = rng.gen_range(0.0..PI);
        let c = Point2::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
        let r = TiltedRect::from_axes(c, 0.5 * big_l, 0.5 * l, angle)?;
        let pr = check_process_ratio(&r);
        let (lo, hi) = pr.sandwich.unwrap_or((f64::NAN, f64::NAN));
        let holds = pr.within_sandwich();
        bad2 += usize::from(!holds);
        t2.push(vec![num(r.short_side()), num(r.long_side()), num(r.angle), pr.count.into(), num(pr.area), num(pr.ratio), num(lo), num(hi), holds.into()]);
    }
    report.verdicts.push(Verdict::new(
        2,
        bad2 == 0 && s.random_rects > 0,
        format!("{bad2} sandwich violations over {} rectangles", s.random_rects),
    ));
    report.tables.push(t1);
    report.tables.push(t2);
    Ok(report)
}

/// Continuous overlap bound on random trapezia and the discrete scale.
pub fn run_trapezium_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let s = &cfg.suites;
    let mut report = ExperimentReport::new("trapezium", cfg);
    report.provenance("overlap_constant", 1.0 / 72.0, Source::Theory, "|(x+P) ∩ Δ| >= min(alpha,1)/72 |P|");
    report.provenance("orientation", "C farther from the altitude foot than B", Source::Convention, "the bound fails near B' when the rectangle runs along the shorter edge");
    report.provenance("discrete_envelope", 1.0 / 3.0, Source::Convention, "threshold for lattice counts = continuous constant * (1/2)/(3/2)");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // C is the far endpoint, so P runs along the longer edge; the literal
    // `c < b` orientation is measured alongside for the record.
    let mut t3 = Table::new("trapezium", 3, &["near", "far", "alpha", "samples", "min_margin", "violations", "literal_violations"]);
    let mut violations = 0;
    let mut literal = 0;
    let mut min_samples = usize::MAX;
    for _ in 0..s.trapezium_cases {
        let far = rng.gen_range(0.1..10.0);
        let near = rng.gen_range(0.0..far * 0.99);
        let cons = Construction1::with_far_c(near, far)?;
        let lit = Construction1::new(far, near)?;
        let pts = cons.sample_trapezium(s.trapezium_uniform, &mut rng);
        min_samples = min_samples.min(pts.len());
        let mut v = 0;
        let mut lv = 0;
        let mut margin = f64::INFINITY;
        for x in &pts {
            let chk = verify_overlap(&cons, *x)?;
            margin = margin.min(chk.measured / chk.bound);
            v += usize::from(!chk.pass);
            // V is the same trapezium in both orientations
            lv += usize::from(!verify_overlap(&lit, *x)?.pass);
        }
        violations += v;
        literal += lv;
        t3.push(vec![num(near), num(far), num(cons.alpha), pts.len().into(), num(margin), v.into(), lv.into()]);
    }
    let hand = Construction1::new(1.0, 0.0)?;
    let chk = verify_overlap(&hand, Point2::new(0.0, 1.0))?;
    let mirrored = verify_overlap(&Construction1::with_far_c(0.0, 1.0)?, Point2::ORIGIN)?;
    let close = |m: f64, b: f64| (m - 9.0 / 32.0).abs() <= 1e-9 && (b - 1.0 / 32.0).abs() <= 1e-9;
    let hand_ok = close(chk.measured, chk.bound) && close(mirrored.measured, mirrored.bound);
    report.verdicts.push(Verdict::new(
        3,
        violations == 0 && hand_ok && min_samples >= 104,
        format!(
            "{violations} violations over {} cases (>= {min_samples} points each, rectangle on the longer edge; \
             the shorter-edge orientation has {literal}); hand case measured {:.12} bound {:.12}, mirrored {:.12}",
            s.trapezium_cases, chk.measured, chk.bound, mirrored.measured
        ),
    ));
    report.figures.push(Figure {
        file: "construction.svg".into(),
        svg: construction_svg(&Construction1::with_far_c(1.0, 2.0)?),
    });

    let mut t4 = Table::new("discrete_scale", 4, &["b", "c", "delta", "worst_ratio", "threshold", "doubled_ratio", "doubled_ok"]);
    let mut ok4 = true;
    let mut detail = Vec::new();
    for &(b, c) in &s.discrete_cases {
        let cons = Construction1::with_far_c(c, b)?;
        let pts = cons.sample_trapezium(TRAPEZIUM_SAMPLES, &mut rng);
        match discrete_overlap_scale(&cons, &pts, &s.discrete_grid) {
            Ok(sc) => {
                let doubled = discrete_overlap_ratio(&cons, &pts, 2.0 * sc.delta)?;
                let good = sc.delta <= 1024.0 && doubled >= sc.threshold;
                ok4 &= good;
                detail.push(format!("({b}, {c}): delta {} ratio {:.4} doubled {:.4}", sc.delta, sc.worst_ratio, doubled));
                t4.push(vec![num(b), num(c), num(sc.delta), num(sc.worst_ratio), num(sc.threshold), num(doubled), good.into()]);
            }
            Err(e) => {
                ok4 = false;
                detail.push(format!("({b}, {c}): {e}"));
                t4.push(vec![num(b), num(c), Value::Null, Value::Null, num(cons.discrete_threshold()), Value::Null, false.into()]);
            }
        }
    }
    report.verdicts.push(Verdict::new(4, ok4 && !s.discrete_cases.is_empty(), detail.join("; ")));
    report.tables.push(t3);
    report.tables.push(t4);
    Ok(report)
}

/// Three families whose offsets stay well inside the `K = 50` window.
pub fn transfer_families() -> Result<Vec<(&'static str, RectFamily)>> {
    let squares = (1..=5)
        .map(|h| TiltedRect::axis_aligned(-(h as f64), h as f64, -(h as f64), h as f64))
        .collect::<Result<Vec<_>>>()?;
    let lac = gen_lacunary(0.5, 6)?
        .slopes()
        .iter()
        .enumerate()
        .map(|(i, s)| TiltedRect::new(Point2::ORIGIN, 4.0 + i as f64, 1.5, s.atan()))
        .collect::<Result<Vec<_>>>()?;
    let power = gen_power(1.0, 6)?
        .slopes()
        .iter()
        .map(|s| TiltedRect::new(Point2::ORIGIN, 9.0, 2.0, s.atan()))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        ("squares", RectFamily::new(squares)?),
        ("lacunary", RectFamily::new(lac)?),
        ("power", RectFamily::new(power)?),
    ])
}

/// `A_R|φ_x|` on the lattice against `M_R|f|` along the orbit.
pub fn run_transfer_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let sys = cfg.torus_or_default()?;
    let k = cfg.suites.transfer_window;
    let mut report = ExperimentReport::new("transfer", cfg);
    report.provenance("tolerance", 1e-12, Source::Convention, "largest admissible absolute error");
    let observables = [
        ("cos", ObservedFunction::cos(1)),
        ("interval", ObservedFunction::interval(0.2, 0.65)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x0: f64 = rng.gen();
    let mut t = Table::new("transfer", 8, &["family", "observable", "K", "evaluations", "max_abs_error"]);
    let mut worst = 0.0f64;
    let mut evals = 0;
    for (fname, fam) in transfer_families()? {
        for (oname, f) in &observables {
            let chk = transfer_check(&sys, f, &fam, k, x0)?;
            worst = worst.max(chk.max_abs_error);
            evals += chk.evaluations;
            t.push(vec![fname.into(), (*oname).into(), k.into(), chk.evaluations.into(), num(chk.max_abs_error)]);
        }
    }
    report.verdicts.push(Verdict::new(
        8,
        worst <= 1e-12 && evals > 0,
        format!("max error {worst:e} over {evals} evaluations, K = {k}"),
    ));
    report.tables.push(t);
    Ok(report)
}

fn random_trig(rng: &mut ChaCha8Rng) -> ObservedFunction {
    let n = rng.gen_range(1..=3);
    ObservedFunction::Trig {
        constant: rng.gen_range(-1.0..1.0),
        terms: (0..n)
            .map(|_| (rng.gen_range(1..=3), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    }
}

/// Averages of `g − g∘T` against the symmetric-difference bound, plus the
/// convergence of plain averages along a doubling sweep.
pub fn run_coboundary_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let s = &cfg.suites;
    let sys = cfg.torus_or_default()?;
    let mut report = ExperimentReport::new("coboundary", cfg);
    report.provenance("shape_bound", "4(l+L)/(lL) sup|g|", Source::Theory, "upper envelope for the symmetric-difference bound");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut t = Table::new("coboundary", 9, &["l", "L", "angle", "measured", "bound", "shape_bound", "holds"]);
    let mut violations = 0;
    for _ in 0..s.coboundary_instances {
        let l = rng.gen_range(8.0..60.0);
        let big_l = l * rng.gen_range(1.0f64..4.0);
        let angle = rng.gen_range(0.0..PI);
        let r = TiltedRect::from_axes(Point2::ORIGIN, 0.5 * big_l, 0.5 * l, angle)?;
        let g = random_trig(&mut rng);
        let d = coboundary_decay(&sys, &g, &r, rng.gen())?;
        let shape = 4.0 * (l + big_l) / (l * big_l) * g.sup_abs();
        let ok = d.holds() && d.bound <= shape;
        violations += usize::from(!ok);
        t.push(vec![num(l), num(big_l), num(angle), num(d.measured), num(d.bound), num(shape), ok.into()]);
    }

    let mut sweep = Table::new("coboundary_sweep", 9, &["l", "L", "measured", "bound", "shape_bound"]);
    let g = ObservedFunction::cos(1);
    let mut bounds = Vec::new();
    for &l in &s.coboundary_sweep {
        let r = TiltedRect::from_axes(Point2::ORIGIN, l, 0.5 * l, (1.0f64 / 3.0).atan())?;
        let d = coboundary_decay(&sys, &g, &r, 0.1)?;
        let shape = 4.0 * (l + 2.0 * l) / (2.0 * l * l) * g.sup_abs();
        violations += usize::from(!(d.holds() && d.bound <= shape));
        bounds.push(d.bound);
        sweep.push(vec![num(l), num(2.0 * l), num(d.measured), num(d.bound), num(shape)]);
    }
    let decreasing = bounds.windows(2).all(|w| w[1] < w[0]);
    report.verdicts.push(Verdict::new(
        9,
        violations == 0 && decreasing,
        format!(
            "{violations} violations over {} instances and the sweep; sweep bounds {bounds:?}",
            s.coboundary_instances
        ),
    ));

    // |M_R f − ∫f| along the same sweep, lacunary slope 1/2
    let mut conv = Table::new("convergence", 9, &["observable", "l", "abs_error"]);
    for (name, f) in [("cos1", ObservedFunction::cos(1)), ("trig3", ObservedFunction::Trig { constant: 0.5, terms: vec![(1, 0.3, 0.2), (3, -0.4, 0.1)] })] {
        for &l in &s.coboundary_sweep {
            let r = TiltedRect::from_axes(Point2::ORIGIN, l, 0.5 * l, 0.5f64.atan())?;
            let e = (ergodic_average(&sys, &f, &r, 0.3)? - f.exact_integral()).abs();
            conv.push(vec![name.into(), num(l), num(e)]);
        }
    }
    report.tables.push(t);
    report.tables.push(sweep);
    report.tables.push(conv);
    Ok(report)
}
