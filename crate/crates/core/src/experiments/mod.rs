//! Experiment runners behind the `perron-lab` binary. Each returns an
//! [`ExperimentReport`] holding verdicts, metric tables and figures.

mod bad;
mod config;
mod good;
mod report;
mod suites;

pub use bad::{run_bad_experiment, two_triangle_grid_oracle, GROWTH_SLACK, ORACLE_STEP, PF_LIMIT};
pub use config::{BlockRange, DirectionSpec, ExperimentConfig, ExperimentKind, GoodParams, SuiteParams};
pub use good::{default_levels, random_indicator, run_good_experiment};
pub use report::{anchor, num, ExperimentReport, Figure, Provenance, Source, Table, Verdict};
pub use suites::{
    run_coboundary_suite, run_lattice_suite, run_transfer_suite, run_trapezium_suite, transfer_families,
    TIGHT_ENVELOPE, TRIANGLE_200_COUNT,
};

use crate::error::Result;

pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match kind {
        ExperimentKind::Good => run_good_experiment(cfg),
        ExperimentKind::Bad => run_bad_experiment(cfg),
        ExperimentKind::Lattice => run_lattice_suite(cfg),
        ExperimentKind::Trapezium => run_trapezium_suite(cfg),
        ExperimentKind::Transfer => run_transfer_suite(cfg),
        ExperimentKind::Coboundary => run_coboundary_suite(cfg),
        ExperimentKind::Verify => {
            let mut all = ExperimentReport::new("verify", cfg);
            for r in [run_lattice_suite, run_trapezium_suite, run_transfer_suite, run_coboundary_suite] {
                all.absorb(r(cfg)?);
            }
            Ok(all)
        }
    }
}
