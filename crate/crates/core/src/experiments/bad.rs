use serde_json::Value;

use super::config::{DirectionSpec, ExperimentConfig};
use super::report::{num, ExperimentReport, Figure, Source, Table, Verdict};
use crate::discrete_maximal::{maximal_indicator, scale_block, t0_of, tauberian_from_image};
use crate::error::{Error, Result};
use crate::geometry::{union_area, Point2};
use crate::perron_tree::{assemble_block, block_indices, build_triangles, select_delta, PerronBlock};
use crate::svg::block_svg;

/// Default cap on the truncated Perron factor.
pub const PF_LIMIT: f64 = 8.0;

/// Slack allowed between the ratio growth and `ε_first / ε_last`.
pub const GROWTH_SLACK: f64 = 4.0;

/// Step of the exhaustive grid behind the two-triangle check.
pub const ORACLE_STEP: f64 = 1e-3;

/// `min_τ |Δ_a ∪ (Δ_b + τ)| / |Δ_a ∪ Δ_b|` over a grid of step `step` on
/// `[-width, 0]`, `width` the span of both bases.
pub fn two_triangle_grid_oracle(d: &crate::directions::DirectionSet, step: f64) -> Result<f64> {
    let t = build_triangles(d, 1)?;
    let width = d.u()[3] - d.u()[1];
    let orig = union_area(&t);
    let steps = (width / step).round() as i64;
    Ok((0..=steps)
        .map(|i| {
            let tau = -(i as f64) * step;
            union_area(&[t[0].clone(), t[1].translate(Point2::new(tau, 0.0))]) / orig
        })
        .fold(f64::INFINITY, f64::min))
}

struct BlockOutcome {
    block: PerronBlock,
    delta: f64,
    t0: f64,
    e_count: usize,
    v_count: usize,
    ratios: Vec<(f64, u64, f64)>,
}

/// Perron blocks, their lattice scales, `t₀` and the Tauberian ratios of
/// `A*χ_{δK^n}` at `λ = t₀·m` for each multiplier `m` (default `1, 1/2`).
pub fn run_bad_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let spec = cfg.directions_or(DirectionSpec::Power { s: 1.0, count: 64 });
    let d = spec.build()?;
    let range = cfg.blocks_or_default();
    let top = *block_indices(range.last).end();
    if top > d.max_index() {
        return Err(Error::Config(format!(
            "blocks up to n = {} need u_{top}; the direction spec stops at u_{}",
            range.last,
            d.max_index()
        )));
    }
    let pf_limit = cfg.pf_limit.unwrap_or(PF_LIMIT);
    let diag = d.diagnostics(top.max(3))?;
    if diag.perron_factor_truncated > pf_limit {
        let half = d.perron_factor((top / 2).max(3))?.value;
        return Err(Error::Refused(format!(
            "truncated Perron factor {:.4e} (u_{top}) exceeds {pf_limit}; it grows from {half:.4e} at u_{} so block compression has no guarantee. \
             Lacunary directions belong to the good experiment",
            diag.perron_factor_truncated,
            (top / 2).max(3)
        )));
    }
    if !(diag.condition_i_constant > 0.0) {
        return Err(Error::ConditionIFailed(diag.condition_i_constant));
    }
    let opt = cfg.optimizer_or_default();
    let grid = cfg.delta_grid_or_default();
    let multipliers = cfg.lambdas.clone().unwrap_or_else(|| vec![1.0, 0.5]);

    let mut report = ExperimentReport::new("bad", cfg);
    report.provenance("perron_factor_truncated", diag.perron_factor_truncated, Source::Measured, &d.label);
    report.provenance("condition_i_constant", diag.condition_i_constant, Source::Measured, &d.label);
    report.provenance("similar_copy_fraction", 1.0 / 9.0, Source::Theory, "|V^n| >= |union of Delta_k| / 9");
    report.provenance("compression_envelope", 3.0, Source::Convention, "count ratio <= 3 eps_n: the 3/2 over 1/2 volume/count envelope");
    report.provenance("overlap_envelope", 1.0 / 3.0, Source::Convention, "discrete overlap threshold = min(alpha,1)/72 * 1/3");
    report.provenance("growth_slack", GROWTH_SLACK, Source::Convention, "final/initial ratio >= (eps_first/eps_last)/4");
    report.provenance("normal_form", "B = B_{k-1}, C = B_k, coordinates swapped", Source::Convention, "P_k runs along A B_k, slope 1/u_k");

    let mut main = Table::new("bad", 6, &["n", "block_size", "epsilon", "delta", "t0", "lambda", "superlevel_count", "E_count", "ratio"]);
    let mut blocks = Table::new("blocks", 5, &[
        "n", "block_size", "epsilon", "taus", "original_area", "k_area", "v_area", "similar_copy", "delta", "t0", "E_count", "V_count", "original_count",
    ]);
    let mut trace = Table::new("delta_trace", 5, &[
        "n", "delta", "compression", "overlap_margin", "v_fraction", "pass_compression", "pass_overlap", "pass_v_fraction",
    ]);

    let mut outcomes: Vec<BlockOutcome> = Vec::new();
    let mut failure: Option<String> = None;
    let mut prev_delta = 0.0;
    for n in range.first..=range.last {
        let block = assemble_block(&d, n, &opt)?;
        let allowed: Vec<f64> = grid.iter().copied().filter(|&g| g >= 2.0 * prev_delta).collect();
        let sel = select_delta(&block, &allowed, cfg.seed)?;
        for t in &sel.trace {
            trace.push(vec![
                n.into(),
                num(t.delta),
                num(t.compression),
                num(t.overlap_margin),
                num(t.v_fraction),
                t.pass_compression.into(),
                t.pass_overlap.into(),
                t.pass_v_fraction.into(),
            ]);
        }
        report.figures.push(Figure {
            file: format!("block_{n}.svg"),
            svg: block_svg(&block),
        });
        let Some(delta) = sel.delta else {
            let msg = format!("block {n}: no scale in {allowed:?} meets the compression, overlap and V-count requirements");
            main.push(vec![
                n.into(),
                block.len().into(),
                num(block.epsilon),
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
            ]);
            failure = Some(msg);
            break;
        };
        prev_delta = delta;
        let block = block.with_delta(delta);
        let sb = scale_block(&block, delta)?;
        let t0 = t0_of(&sb)?;
        let window = sb.family.hull(sb.e.window().ok_or(Error::EmptySet("δK^n ∩ Z²"))?);
        let image = maximal_indicator(&sb.e, &sb.family, window)?;
        let mut ratios = Vec::new();
        for &m in &multipliers {
            let r = tauberian_from_image(&image, sb.e.len() as u64, t0 * m)?;
            main.push(vec![
                n.into(),
                block.len().into(),
                num(block.epsilon),
                num(delta),
                num(t0),
                num(r.lambda),
                r.superlevel_count.into(),
                r.e_count.into(),
                num(r.ratio),
            ]);
            ratios.push((m, r.superlevel_count, r.ratio));
        }
        let (oa, ka, va) = (block.original_area(), block.k_area(), block.v_area());
        blocks.push(vec![
            n.into(),
            block.len().into(),
            num(block.epsilon),
            Value::from(block.taus.clone()),
            num(oa),
            num(ka),
            num(va),
            (va >= oa / 9.0).into(),
            num(delta),
            num(t0),
            sb.e.len().into(),
            sb.v_points.len().into(),
            sb.original_count.into(),
        ]);
        outcomes.push(BlockOutcome {
            e_count: sb.e.len(),
            v_count: sb.v_points.len(),
            block,
            delta,
            t0,
            ratios,
        });
    }

    // compression
    let eps: Vec<f64> = outcomes.iter().map(|o| o.block.epsilon).collect();
    let monotone = eps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let strict_end = eps.len() >= 2 && eps.last() < eps.first();
    let mut detail = format!("eps = {eps:?}");
    let mut pass5 = failure.is_none() && monotone && strict_end;
    if d.max_index() >= 3 && range.first <= 1 && range.last >= 1 {
        let oracle = two_triangle_grid_oracle(&d, ORACLE_STEP)?;
        let block1 = outcomes.iter().find(|o| o.block.n == 1);
        if let Some(b) = block1 {
            let gap = (b.block.epsilon - oracle).abs();
            detail.push_str(&format!("; two-triangle eps {:.6} vs grid oracle {oracle:.6}", b.block.epsilon));
            pass5 &= gap <= ORACLE_STEP;
        }
    }
    report.verdicts.push(Verdict::new(5, pass5, detail));

    // blow-up at λ = t₀
    let at_t0: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.ratios.iter().find(|r| r.0 == 1.0).map(|r| r.2))
        .collect();
    let increasing = at_t0.len() >= 2 && at_t0.windows(2).all(|w| w[1] > w[0]);
    let (growth, needed) = match (at_t0.first(), at_t0.last(), eps.first(), eps.last()) {
        (Some(r0), Some(r1), Some(e0), Some(e1)) => (r1 / r0, e0 / e1 / GROWTH_SLACK),
        _ => (f64::NAN, f64::NAN),
    };
    let pass6 = failure.is_none() && increasing && growth >= needed;
    let mut detail = format!(
        "ratios at t0 = {at_t0:?}; growth {growth:.4} vs required (eps_first/eps_last)/{GROWTH_SLACK} = {needed:.4}"
    );
    if let Some(f) = &failure {
        detail.push_str(&format!("; {f}"));
    }
    report.verdicts.push(Verdict::new(6, pass6, detail));
    for o in &outcomes {
        report.notes.push(format!(
            "n = {}: delta = {}, t0 = {:.6}, #E = {}, #V = {}, #V/#E = {:.4}",
            o.block.n,
            o.delta,
            o.t0,
            o.e_count,
            o.v_count,
            o.v_count as f64 / o.e_count as f64
        ));
    }
    report.tables.push(main);
    report.tables.push(blocks);
    report.tables.push(trace);
    Ok(report)
}
