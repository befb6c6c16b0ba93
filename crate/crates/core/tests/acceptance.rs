//! Acceptance run: one PASS/FAIL line per criterion, with wall time against
//! its budget.
//!
//! The process exits 0 even when a criterion is red so that the ordinary test
//! run stays usable; set `PERRON_LAB_STRICT=1` to turn any FAIL into exit 1.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use perron_lab::directions::gen_power;
use perron_lab::discrete_maximal::{maximal, GridFunction, RectFamily};
use perron_lab::experiments::{
    run_bad_experiment, run_coboundary_suite, run_good_experiment, run_lattice_suite, run_transfer_suite,
    run_trapezium_suite, two_triangle_grid_oracle, ExperimentConfig, ExperimentReport, ORACLE_STEP,
};
use perron_lab::geometry::{ConvexPolygon, Point2, TiltedRect};
use perron_lab::lattice::{count_points, IntBox};
use perron_lab::perron_tree::{assemble_block, OptimizerConfig, TranslationMethod};
use perron_lab::triangle_cover::{verify_overlap, Construction1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

struct Line {
    id: u8,
    pass: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn from_report(r: &ExperimentReport, id: u8, elapsed: Duration, budget: Duration, extra: (bool, String)) -> Line {
    let (pass, detail) = match r.verdict(id) {
        Some(v) => (v.passed && extra.0, format!("{}{}", v.detail, extra.1)),
        None => (false, format!("no verdict for C{id}")),
    };
    Line { id, pass, elapsed, budget, detail }
}

fn c1_c2(cfg: &ExperimentConfig) -> Vec<Line> {
    let (r, t) = timed(|| run_lattice_suite(cfg).expect("lattice suite"));
    // independent of the suite: Pick gives 200·200/2 + 600/2 + 1
    let tri = ConvexPolygon::triangle(Point2::ORIGIN, Point2::new(200.0, 0.0), Point2::new(0.0, 200.0)).unwrap();
    let n = count_points(&tri);
    vec![
        from_report(&r, 1, t, secs(5), (n == 20301, format!("; Pick oracle gives {n}"))),
        from_report(&r, 2, t, secs(10), (true, String::new())),
    ]
}

fn c3_c4(cfg: &ExperimentConfig) -> Vec<Line> {
    let (r, t) = timed(|| run_trapezium_suite(cfg).expect("trapezium suite"));
    let hand = verify_overlap(&Construction1::new(1.0, 0.0).unwrap(), Point2::new(0.0, 1.0)).unwrap();
    let ok = (hand.measured - 9.0 / 32.0).abs() <= 1e-9 && (hand.bound - 1.0 / 32.0).abs() <= 1e-9;
    vec![
        from_report(&r, 3, t, secs(30), (ok, String::new())),
        from_report(&r, 4, t, secs(60), (true, String::new())),
    ]
}

fn c5() -> Line {
    let (res, elapsed) = timed(|| {
        let opt = OptimizerConfig::new(TranslationMethod::CoordinateSearch);
        let mut pass = true;
        let mut detail = Vec::new();
        for s in [1.0, 2.0] {
            let d = gen_power(s, 64).unwrap();
            let eps: Vec<f64> = (0..=3).map(|n| assemble_block(&d, n, &opt).unwrap().epsilon).collect();
            let monotone = eps.windows(2).all(|w| w[1] <= w[0]);
            let oracle = two_triangle_grid_oracle(&d, ORACLE_STEP).unwrap();
            let gap = (eps[1] - oracle).abs();
            pass &= monotone && eps[3] < eps[0] && gap <= 1e-3;
            let shown: Vec<String> = eps.iter().map(|e| format!("{e:.4}")).collect();
            detail.push(format!("u = k^{s}: eps [{}], two-triangle gap {gap:.2e}", shown.join(", ")));
        }
        (pass, detail.join("; "))
    });
    Line { id: 5, pass: res.0, elapsed, budget: secs(120), detail: res.1 }
}

fn c6(cfg: &ExperimentConfig) -> Line {
    let (r, t) = timed(|| run_bad_experiment(cfg).expect("bad experiment"));
    from_report(&r, 6, t, secs(600), (true, String::new()))
}

fn c7(cfg: &ExperimentConfig) -> Line {
    let (r, t) = timed(|| run_good_experiment(cfg).expect("good experiment"));
    from_report(&r, 7, t, secs(300), (true, String::new()))
}

fn c8(cfg: &ExperimentConfig) -> Line {
    let (r, t) = timed(|| run_transfer_suite(cfg).expect("transfer suite"));
    from_report(&r, 8, t, secs(10), (true, String::new()))
}

fn c9(cfg: &ExperimentConfig) -> Line {
    let (r, t) = timed(|| run_coboundary_suite(cfg).expect("coboundary suite"));
    from_report(&r, 9, t, secs(30), (true, String::new()))
}

/// Offsets of `r` by scanning its bounding box row by row.
fn scan_offsets(r: &TiltedRect) -> Vec<(i64, i64)> {
    let bb = r.bbox();
    let (c, s) = (r.angle.cos(), r.angle.sin());
    let mut out = Vec::new();
    for y in bb.min.y.floor() as i64..=bb.max.y.ceil() as i64 {
        for x in bb.min.x.floor() as i64..=bb.max.x.ceil() as i64 {
            let d = Point2::new(x as f64, y as f64) - r.center;
            if (d.x * c + d.y * s).abs() <= r.long_half && (-d.x * s + d.y * c).abs() <= r.short_half {
                out.push((x, y));
            }
        }
    }
    out
}

fn c10() -> Line {
    const W: i64 = 40;
    let (res, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut mismatches = 0usize;
        let mut points = 0usize;
        for _ in 0..50 {
            let values: Vec<f64> = (0..W * W).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rects: Vec<TiltedRect> = (0..rng.gen_range(1..=8))
                .map(|_| {
                    let long = rng.gen_range(0.5..10.0);
                    let short = rng.gen_range(0.5..=long);
                    let t = rng.gen_range(0.0..PI);
                    let r = TiltedRect::new(Point2::ORIGIN, long, short, t).unwrap();
                    let u = Point2::new(t.cos(), t.sin()) * (rng.gen_range(-0.5..0.5) * long);
                    let n = Point2::new(-t.sin(), t.cos()) * (rng.gen_range(-0.5..0.5) * short);
                    r.translate(u + n)
                })
                .collect();
            let offsets: Vec<Vec<(i64, i64)>> = rects.iter().map(scan_offsets).collect();
            let fam = RectFamily::new(rects).unwrap();
            let phi = GridFunction::new(IntBox::new(0, W - 1, 0, W - 1), values.clone()).unwrap();
            let eval = IntBox::new(-4, W + 3, -4, W + 3);
            let got = maximal(&phi, &fam, eval);
            let val = |x: i64, y: i64| {
                if (0..W).contains(&x) && (0..W).contains(&y) { values[(y * W + x) as usize].abs() } else { 0.0 }
            };
            for y in eval.y0..=eval.y1 {
                for x in eval.x0..=eval.x1 {
                    let mut best = 0.0f64;
                    for o in &offsets {
                        let mut s = 0.0;
                        for &(i, j) in o {
                            s += val(x + i, y + j);
                        }
                        best = best.max(s / o.len() as f64);
                    }
                    points += 1;
                    if got.get(x, y).to_bits() != best.to_bits() {
                        mismatches += 1;
                    }
                }
            }
        }
        (mismatches == 0, format!("{mismatches} mismatches over {points} evaluations on 50 instances"))
    });
    Line { id: 10, pass: res.0, elapsed, budget: secs(30), detail: res.1 }
}

fn main() -> ExitCode {
    let cfg = ExperimentConfig::with_seed(SEED);
    let mut lines = Vec::new();
    lines.extend(c1_c2(&cfg));
    lines.extend(c3_c4(&cfg));
    lines.push(c5());
    lines.push(c6(&cfg));
    lines.push(c7(&cfg));
    lines.push(c8(&cfg));
    lines.push(c9(&cfg));
    lines.push(c10());

    let mut failed = 0;
    for l in &lines {
        let in_time = l.elapsed <= l.budget;
        let pass = l.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} C{} [{:.2?} of {:?}{}] {}",
            if pass { "PASS" } else { "FAIL" },
            l.id,
            l.elapsed,
            l.budget,
            if in_time { "" } else { ", over budget" },
            l.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    let strict = std::env::var("PERRON_LAB_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 && strict {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
