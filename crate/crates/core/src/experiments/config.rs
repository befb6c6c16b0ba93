use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::directions::{gen_lacunary, gen_power, DirectionSet};
use crate::ergodic_torus::TorusSystem;
use crate::error::{Error, Result};
use crate::perron_tree::{OptimizerConfig, SlideRule, TranslationMethod};
use crate::triangle_cover::doubling_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Good,
    Bad,
    Lattice,
    Trapezium,
    Transfer,
    Coboundary,
    /// Lattice, trapezium, transfer and coboundary suites together.
    Verify,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Good,
        ExperimentKind::Bad,
        ExperimentKind::Lattice,
        ExperimentKind::Trapezium,
        ExperimentKind::Transfer,
        ExperimentKind::Coboundary,
        ExperimentKind::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Good => "good",
            ExperimentKind::Bad => "bad",
            ExperimentKind::Lattice => "lattice",
            ExperimentKind::Trapezium => "trapezium",
            ExperimentKind::Transfer => "transfer",
            ExperimentKind::Coboundary => "coboundary",
            ExperimentKind::Verify => "verify",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!("unknown experiment `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// How to generate `u_1, u_2, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DirectionSpec {
    /// `u_k = k^s`.
    Power { s: f64, count: usize },
    /// Slopes `λ^k`.
    Lacunary { lambda: f64, count: usize },
    /// `u_k = base^k`.
    Exponential { base: f64, count: usize },
    Explicit { u: Vec<f64> },
}

impl DirectionSpec {
    pub fn build(&self) -> Result<DirectionSet> {
        let check_count = |c: usize| {
            if c == 0 || c > 1 << 16 {
                Err(Error::Config(format!("direction count {c} outside [1, 65536]")))
            } else {
                Ok(())
            }
        };
        match *self {
            DirectionSpec::Power { s, count } => {
                check_count(count)?;
                gen_power(s, count)
            }
            DirectionSpec::Lacunary { lambda, count } => {
                check_count(count)?;
                gen_lacunary(lambda, count)
            }
            DirectionSpec::Exponential { base, count } => {
                check_count(count)?;
                if !(base > 1.0) {
                    return Err(Error::Config(format!("exponential base must exceed 1, got {base}")));
                }
                let u: Vec<f64> = (1..=count as i32).map(|k| base.powi(k)).collect();
                DirectionSet::from_u(format!("exponential({base})"), &u)
            }
            DirectionSpec::Explicit { ref u } => DirectionSet::from_u("explicit", u),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockRange {
    pub first: u32,
    pub last: u32,
}

/// Parameters of the weak-type experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoodParams {
    pub rect_count: usize,
    /// Short sides `l` drawn from this list.
    pub short_sides: Vec<f64>,
    /// Aspect ratios `L/l` drawn log-uniformly from `[lo, hi]`.
    pub aspect: (f64, f64),
    /// Support sizes of the random indicators.
    pub supports: Vec<usize>,
    pub replicates: usize,
    /// Fraction of the square sampling window occupied by the support.
    pub density: f64,
    /// Largest admissible max/min ratio of the per-size witnesses.
    pub max_spread: f64,
    /// Non-lacunary directions for the contrast run.
    pub contrast: DirectionSpec,
}

impl Default for GoodParams {
    fn default() -> Self {
        Self {
            rect_count: 50,
            short_sides: vec![2.0, 4.0, 8.0],
            aspect: (2.0, 32.0),
            supports: vec![10, 100, 1000],
            replicates: 7,
            density: 0.25,
            max_spread: 4.0,
            contrast: DirectionSpec::Power { s: 1.0, count: 50 },
        }
    }
}

/// Sizes of the verification suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    pub density_deltas: Vec<f64>,
    pub random_rects: usize,
    pub trapezium_cases: usize,
    /// Uniform samples per trapezium on top of vertices and edge midpoints.
    pub trapezium_uniform: usize,
    pub discrete_cases: Vec<(f64, f64)>,
    pub discrete_grid: Vec<f64>,
    pub transfer_window: i64,
    pub coboundary_instances: usize,
    pub coboundary_sweep: Vec<f64>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            density_deltas: vec![50.0, 100.0, 200.0, 400.0],
            random_rects: 100,
            trapezium_cases: 100,
            trapezium_uniform: 96,
            discrete_cases: vec![(1.0, 0.0), (2.0, 1.0), (5.0, 0.5)],
            discrete_grid: doubling_grid(8.0, 1024.0),
            transfer_window: 50,
            coboundary_instances: 200,
            coboundary_sweep: vec![25.0, 50.0, 100.0, 200.0],
        }
    }
}

/// One JSON document describing a run. Only `seed` is mandatory; every other
/// field falls back to a per-experiment default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<DirectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    /// Bad experiment: multiples of the measured `t₀`. Good experiment:
    /// absolute levels over which the witness is maximised.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    /// The bad experiment refuses direction sets whose truncated Perron
    /// factor exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pf_limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusSystem>,
    #[serde(default)]
    pub good: GoodParams,
    #[serde(default)]
    pub suites: SuiteParams,
}

impl ExperimentConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            experiment: None,
            seed,
            output_dir: None,
            directions: None,
            blocks: None,
            delta_grid: None,
            lambdas: None,
            p: None,
            optimizer: None,
            pf_limit: None,
            torus: None,
            good: GoodParams::default(),
            suites: SuiteParams::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn directions_or(&self, default: DirectionSpec) -> DirectionSpec {
        self.directions.clone().unwrap_or(default)
    }

    pub fn blocks_or_default(&self) -> BlockRange {
        self.blocks.unwrap_or(BlockRange { first: 0, last: 3 })
    }

    pub fn delta_grid_or_default(&self) -> Vec<f64> {
        self.delta_grid.clone().unwrap_or_else(|| doubling_grid(16.0, 2048.0))
    }

    pub fn p_or_default(&self) -> Vec<f64> {
        self.p.clone().unwrap_or_else(|| vec![1.5, 2.0, 4.0])
    }

    pub fn optimizer_or_default(&self) -> OptimizerConfig {
        self.optimizer
            .unwrap_or_else(|| OptimizerConfig::new(TranslationMethod::CoordinateSearch))
    }

    pub fn torus_or_default(&self) -> Result<TorusSystem> {
        match self.torus {
            Some(t) => TorusSystem::new(t.alpha, t.beta),
            None => Ok(TorusSystem::default()),
        }
    }

    /// Range checks on every numeric field.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if let Some(b) = self.blocks {
            if b.first > b.last || b.last > 10 {
                return bad(format!("blocks must satisfy first <= last <= 10, got {}..={}", b.first, b.last));
            }
        }
        if let Some(g) = &self.delta_grid {
            if g.is_empty() || g.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
                return bad("delta_grid must be non-empty and positive".into());
            }
            if g.windows(2).any(|w| w[1] <= w[0]) {
                return bad("delta_grid must be strictly increasing".into());
            }
        }
        if let Some(l) = &self.lambdas {
            if l.is_empty() || l.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return bad("lambdas must be non-empty and positive".into());
            }
        }
        if let Some(p) = &self.p {
            if p.is_empty() || p.iter().any(|v| !(*v >= 1.0) || !v.is_finite()) {
                return bad("p values must lie in [1, ∞)".into());
            }
        }
        if let Some(o) = &self.optimizer {
            if !(o.rel_tol > 0.0 && o.rel_tol < 1.0) || o.coarse_steps < 2 {
                return bad("optimizer needs rel_tol in (0, 1) and coarse_steps >= 2".into());
            }
            if let SlideRule::HeartRatio(h) = o.slide {
                if !(h > 0.0 && h < 1.0) {
                    return bad(format!("heart ratio h must lie in (0, 1), got {h}"));
                }
            }
        }
        if let Some(pf) = self.pf_limit {
            if !(pf >= 2.0) {
                return bad("pf_limit must be at least 2".into());
            }
        }
        if let Some(t) = self.torus {
            TorusSystem::new(t.alpha, t.beta).map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(d) = &self.directions {
            d.build().map_err(|e| Error::Config(e.to_string()))?;
        }
        let g = &self.good;
        if g.rect_count == 0 || g.rect_count > 1000 {
            return bad("good.rect_count must lie in [1, 1000]".into());
        }
        if g.short_sides.is_empty() || g.short_sides.iter().any(|l| !(*l >= 1.0 && *l <= 256.0)) {
            return bad("good.short_sides must lie in [1, 256]".into());
        }
        if !(g.aspect.0 >= 1.0 && g.aspect.0 <= g.aspect.1 && g.aspect.1 <= 256.0) {
            return bad("good.aspect must satisfy 1 <= lo <= hi <= 256".into());
        }
        if g.supports.is_empty() || g.supports.iter().any(|&m| m == 0 || m > 100_000) {
            return bad("good.supports must lie in [1, 100000]".into());
        }
        if g.replicates == 0 || g.replicates > 100 {
            return bad("good.replicates must lie in [1, 100]".into());
        }
        if !(g.density > 0.0 && g.density <= 1.0) {
            return bad("good.density must lie in (0, 1]".into());
        }
        if !(g.max_spread >= 1.0) {
            return bad("good.max_spread must be at least 1".into());
        }
        g.contrast.build().map_err(|e| Error::Config(e.to_string()))?;
        let s = &self.suites;
        if s.density_deltas.iter().any(|d| !(*d > 0.0)) {
            return bad("suites.density_deltas must be positive".into());
        }
        if s.discrete_grid.is_empty() || s.discrete_grid.iter().any(|d| !(*d > 0.0)) {
            return bad("suites.discrete_grid must be non-empty and positive".into());
        }
        if s.discrete_cases.iter().any(|&(b, c)| !(b > 0.0 && c >= 0.0 && c < b)) {
            return bad("suites.discrete_cases need 0 <= c < b".into());
        }
        if !(1..=400).contains(&s.transfer_window) {
            return bad("suites.transfer_window must lie in [1, 400]".into());
        }
        if s.coboundary_sweep.iter().any(|l| !(*l >= 1.0)) {
            return bad("suites.coboundary_sweep must be at least 1".into());
        }
        Ok(())
    }
}
