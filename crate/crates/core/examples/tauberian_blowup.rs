//! Tauberian ratios of `A*χ_E` along dyadic Perron blocks for `u_k = k^s`
//! (`s` from the first argument, default 1).
//!
//! For each block: translations, the lattice scale `δ_n`, the level `t₀` and
//! `#{A*χ_E >= t₀} / #E` with `E = δ_nK^n ∩ Z²`.

use std::time::Instant;

use perron_lab::directions::gen_power;
use perron_lab::discrete_maximal::{maximal_indicator, scale_block, t0_of, tauberian_from_image};
use perron_lab::perron_tree::{assemble_block, select_delta, OptimizerConfig, TranslationMethod};
use perron_lab::triangle_cover::doubling_grid;

fn main() -> perron_lab::Result<()> {
    let s: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let d = gen_power(s, 64)?;
    let grid = doubling_grid(16.0, 2048.0);
    let mut prev = 0.0;
    for n in 0..=3 {
        let clock = Instant::now();
        let block = assemble_block(&d, n, &OptimizerConfig::new(TranslationMethod::CoordinateSearch))?;
        let allowed: Vec<f64> = grid.iter().copied().filter(|&g| g >= 2.0 * prev).collect();
        let sel = select_delta(&block, &allowed, 7)?;
        let Some(delta) = sel.delta else {
            println!("n = {n}: no qualifying scale on the grid");
            break;
        };
        prev = delta;
        let sb = scale_block(&block, delta)?;
        let t0 = t0_of(&sb)?;
        let window = sb.family.hull(sb.e.window().expect("non-empty"));
        let image = maximal_indicator(&sb.e, &sb.family, window)?;
        let r = tauberian_from_image(&image, sb.e.len() as u64, t0)?;
        let r2 = tauberian_from_image(&image, sb.e.len() as u64, t0 / 2.0)?;
        println!(
            "n = {n}: eps = {:.4}, delta = {delta}, #E = {}, #V = {}, t0 = {t0:.4}, ratio(t0) = {:.3}, ratio(t0/2) = {:.3}  [{:.1?}]",
            block.epsilon,
            sb.e.len(),
            sb.v_points.len(),
            r.ratio,
            r2.ratio,
            clock.elapsed()
        );
    }
    Ok(())
}
