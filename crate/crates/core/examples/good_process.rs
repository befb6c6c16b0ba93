//! Weak-type witnesses of a lacunary rectangle family on random indicators,
//! next to the same rectangle sizes with slopes `1/k`.

use perron_lab::experiments::{run_good_experiment, ExperimentConfig};

fn main() -> perron_lab::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let report = run_good_experiment(&ExperimentConfig::with_seed(seed))?;
    let t = report.table("good_summary").expect("summary table");
    println!("{}", t.columns.join("  "));
    for r in &t.rows {
        let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        println!("{}", cells.join("  "));
    }
    for v in &report.verdicts {
        println!("{}: {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    Ok(())
}
