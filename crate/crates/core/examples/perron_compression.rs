//! Compression ratios of dyadic triangle blocks for `u_k = k` and `u_k = k²`.
//!
//! Run with `cargo run --release --example perron_compression`.

use perron_lab::directions::gen_power;
use perron_lab::perron_tree::{assemble_block, OptimizerConfig, TranslationMethod};

fn main() -> perron_lab::Result<()> {
    for s in [1.0, 2.0] {
        let d = gen_power(s, 64)?;
        println!("u_k = k^{s}");
        for method in [TranslationMethod::PairwiseBisection, TranslationMethod::CoordinateSearch] {
            let eps: Vec<String> = (0..=3)
                .map(|n| assemble_block(&d, n, &OptimizerConfig::new(method)).map(|b| format!("{:.4}", b.epsilon)))
                .collect::<Result<_, _>>()?;
            println!("  {method:?}: eps_n = [{}]", eps.join(", "));
        }
    }
    Ok(())
}
