//! Perron factor, condition (i) constant and lacunarity witness for a few
//! direction sets.

use perron_lab::directions::{gen_lacunary, gen_power, DirectionSet};

fn main() -> perron_lab::Result<()> {
    let sets: Vec<DirectionSet> = vec![
        gen_power(1.0, 64)?,
        gen_power(2.0, 64)?,
        gen_power(0.5, 64)?,
        DirectionSet::from_u("2^k", &(1..=40).map(|k| 2f64.powi(k)).collect::<Vec<_>>())?,
        gen_lacunary(0.5, 40)?,
        DirectionSet::from_slopes("1/k", &(1..=64).map(|k| 1.0 / k as f64).collect::<Vec<_>>())?,
    ];
    println!("{:>14} {:>12} {:>10} {:>12} {:>9}", "set", "PF", "argmax", "cond (i)", "lacunary");
    for d in &sets {
        let diag = d.diagnostics(d.max_index())?;
        println!(
            "{:>14} {:>12.4} {:>10} {:>12.4e} {:>9}",
            d.label,
            diag.perron_factor_truncated,
            format!("{:?}", diag.perron_argmax),
            diag.condition_i_constant,
            diag.treated_as_lacunary
        );
    }
    Ok(())
}
