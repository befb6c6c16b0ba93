//! Writes `block_<n>.svg` for the first Perron blocks of `u_k = k` into the
//! directory given as first argument (default `.`).

use std::path::PathBuf;

use perron_lab::directions::gen_power;
use perron_lab::perron_tree::{assemble_block, OptimizerConfig, TranslationMethod};
use perron_lab::svg::block_svg;

fn main() -> perron_lab::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let d = gen_power(1.0, 32)?;
    for n in 0..=3 {
        let block = assemble_block(&d, n, &OptimizerConfig::new(TranslationMethod::CoordinateSearch))?;
        let path = dir.join(format!("block_{n}.svg"));
        std::fs::write(&path, block_svg(&block))?;
        println!("{} (epsilon {:.4})", path.display(), block.epsilon);
    }
    Ok(())
}
