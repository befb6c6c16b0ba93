//! Direction sets `Ω = {1/u_k}` and their diagnostics: the truncated Perron
//! factor, the condition-(i) constant and a lacunarity witness.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Witness ratio at or below which a finite slope list is treated as lacunary
/// by the experiments.
pub const LACUNARY_POLICY: f64 = 0.9;

/// An increasing sequence `u_0 = 0 < u_1 < u_2 < …` with slopes `1/u_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSet {
    u: Vec<f64>,
    pub label: String,
}

impl DirectionSet {
    /// Builds a set from `u_1, u_2, …`; `u_0 = 0` is prepended.
    pub fn from_u(label: impl Into<String>, u_tail: &[f64]) -> Result<Self> {
        if u_tail.is_empty() {
            return Err(invalid("u", "need at least one direction"));
        }
        let mut u = Vec::with_capacity(u_tail.len() + 1);
        u.push(0.0);
        for &v in u_tail {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            if v <= *u.last().unwrap() {
                return Err(invalid("u", "must be strictly increasing and positive"));
            }
            u.push(v);
        }
        Ok(Self {
            u,
            label: label.into(),
        })
    }

    /// Builds a set from strictly decreasing positive slopes.
    pub fn from_slopes(label: impl Into<String>, slopes: &[f64]) -> Result<Self> {
        if slopes.iter().any(|&s| !(s > 0.0)) {
            return Err(invalid("slopes", "must be positive"));
        }
        let u: Vec<f64> = slopes.iter().map(|s| 1.0 / s).collect();
        Self::from_u(label, &u)
    }

    /// `u_0 = 0, u_1, …`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `1/u_k` for `k >= 1`, strictly decreasing.
    pub fn slopes(&self) -> Vec<f64> {
        self.u[1..].iter().map(|v| 1.0 / v).collect()
    }

    /// Number of directions (excluding `u_0`).
    pub fn len(&self) -> usize {
        self.u.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest usable index `k` such that `u_k` exists.
    pub fn max_index(&self) -> usize {
        self.u.len() - 1
    }

    fn require(&self, index: usize) -> Result<()> {
        if index > self.max_index() {
            Err(Error::TooFewDirections {
                required: index,
                available: self.max_index(),
            })
        } else {
            Ok(())
        }
    }

    pub fn perron_factor(&self, max_index: usize) -> Result<PerronFactor> {
        perron_factor(self, max_index)
    }

    pub fn condition_i_constant(&self, max_index: usize) -> Result<f64> {
        condition_i_constant(self, max_index)
    }

    pub fn diagnostics(&self, max_index: usize) -> Result<DirectionDiagnostics> {
        let pf = self.perron_factor(max_index)?;
        let c = self.condition_i_constant(max_index)?;
        let slopes = self.slopes();
        let on_slopes = is_lacunary(&slopes[..max_index.min(slopes.len())]);
        let u = &self.u[1..=max_index];
        let u_ratio = u
            .windows(2)
            .map(|w| w[0] / w[1])
            .fold(0.0f64, f64::max);
        Ok(DirectionDiagnostics {
            perron_factor_truncated: pf.value,
            perron_argmax: pf.argmax,
            condition_i_constant: c,
            lacunary_ratio: (max_index >= 2).then_some(on_slopes.lambda),
            lacunary_ratio_on_u: (max_index >= 2).then_some(u_ratio),
            treated_as_lacunary: on_slopes.lambda <= LACUNARY_POLICY,
        })
    }
}

/// Slopes `λ, λ², …, λ^count`.
pub fn gen_lacunary(lambda: f64, count: usize) -> Result<DirectionSet> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid("lambda", format!("must lie in (0, 1), got {lambda}")));
    }
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    let slopes: Vec<f64> = (1..=count).map(|j| lambda.powi(j as i32)).collect();
    DirectionSet::from_slopes(format!("lacunary({lambda})"), &slopes)
}

/// `u_k = k^s`, slopes `k^{-s}`.
pub fn gen_power(s: f64, count: usize) -> Result<DirectionSet> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be positive, got {s}")));
    }
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    let u: Vec<f64> = (1..=count).map(|k| (k as f64).powf(s)).collect();
    DirectionSet::from_u(format!("power({s})"), &u)
}

/// Truncated Perron factor together with the `(n, l)` that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronFactor {
    pub value: f64,
    pub argmax: (usize, usize),
}

/// `sup (u_{n+2l}−u_{n+l})/(u_{n+l}−u_n) + (u_{n+l}−u_n)/(u_{n+2l}−u_{n+l})`
/// over `n >= 1`, `1 <= l <= n`, `n + 2l <= max_index`.
pub fn perron_factor(d: &DirectionSet, max_index: usize) -> Result<PerronFactor> {
    if max_index < 3 {
        return Err(invalid("max_index", "need n + 2l <= max_index with n, l >= 1"));
    }
    d.require(max_index)?;
    let u = d.u();
    let mut best = PerronFactor {
        value: f64::NEG_INFINITY,
        argmax: (0, 0),
    };
    for n in 1..max_index {
        for l in 1..=n {
            if n + 2 * l > max_index {
                break;
            }
            let a = u[n + 2 * l] - u[n + l];
            let b = u[n + l] - u[n];
            let v = a / b + b / a;
            if v > best.value {
                best = PerronFactor {
                    value: v,
                    argmax: (n, l),
                };
            }
        }
    }
    Ok(best)
}

/// `min_{1<=k<=max_index} (1 + u_{k−1}²) / (u_k − u_{k−1})²`, the largest `c`
/// for which condition (i) holds on the truncation.
pub fn condition_i_constant(d: &DirectionSet, max_index: usize) -> Result<f64> {
    if max_index < 1 {
        return Err(invalid("max_index", "must be at least 1"));
    }
    d.require(max_index)?;
    let u = d.u();
    Ok((1..=max_index)
        .map(|k| (1.0 + u[k - 1] * u[k - 1]) / (u[k] - u[k - 1]).powi(2))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LacunarityWitness {
    pub lacunary: bool,
    /// Largest consecutive ratio `s_{k+1}/s_k`.
    pub lambda: f64,
}

/// Witness ratio of a positive decreasing list: lacunary when the largest
/// consecutive ratio stays below one. A single element is vacuously
/// lacunary with witness 0.
pub fn is_lacunary(slopes: &[f64]) -> LacunarityWitness {
    let lambda = slopes
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    LacunarityWitness {
        lacunary: lambda < 1.0 - 1e-9,
        lambda,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionDiagnostics {
    pub perron_factor_truncated: f64,
    pub perron_argmax: (usize, usize),
    pub condition_i_constant: f64,
    /// Witness ratio read on the slopes.
    pub lacunary_ratio: Option<f64>,
    /// Same witness read on `u` (as `u_k / u_{k+1}`), for comparison.
    pub lacunary_ratio_on_u: Option<f64>,
    /// Slope witness at or below [`LACUNARY_POLICY`].
    pub treated_as_lacunary: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lacunary_examples() {
        let d = gen_lacunary(0.5, 4).unwrap();
        assert_eq!(d.slopes(), vec![0.5, 0.25, 0.125, 0.0625]);
        assert_eq!(gen_lacunary(1.0 / 3.0, 1).unwrap().slopes(), vec![1.0 / 3.0]);
        assert!(gen_lacunary(1.0, 3).is_err());
        assert!(gen_lacunary(0.0, 3).is_err());
        assert!(gen_lacunary(-0.5, 3).is_err());
    }

    #[test]
    fn power_examples() {
        let d = gen_power(1.0, 4).unwrap();
        assert_eq!(d.u(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.slopes(), vec![1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(gen_power(2.0, 3).unwrap().u(), &[0.0, 1.0, 4.0, 9.0]);
        assert!(gen_power(0.0, 3).is_err());
    }

    #[test]
    fn perron_factor_examples() {
        let lin = gen_power(1.0, 64).unwrap();
        let pf = lin.perron_factor(64).unwrap();
        assert_eq!(pf.value, 2.0);
        assert_eq!(lin.diagnostics(64).unwrap().perron_factor_truncated, 2.0);

        let sq = gen_power(2.0, 64).unwrap();
        let pf = sq.perron_factor(64).unwrap();
        assert!((pf.value - 34.0 / 15.0).abs() < 1e-12);
        assert_eq!(pf.argmax.0, pf.argmax.1);

        let exp: Vec<f64> = (1..=32).map(|k| 2f64.powi(k)).collect();
        let d = DirectionSet::from_u("2^k", &exp).unwrap();
        let values: Vec<f64> = (3..=32).map(|m| d.perron_factor(m).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
        // n = l = 10 is the widest admissible gap pair at m = 32
        assert!((values.last().unwrap() - (1024.0 + 1.0 / 1024.0)).abs() < 1e-9);

        assert!(matches!(
            gen_power(1.0, 10).unwrap().perron_factor(11),
            Err(Error::TooFewDirections { required: 11, .. })
        ));
    }

    #[test]
    fn condition_i_examples() {
        let lin = gen_power(1.0, 50).unwrap();
        assert_eq!(lin.condition_i_constant(50).unwrap(), 1.0);
        let sq = gen_power(2.0, 16).unwrap();
        let brute = (1..=16)
            .map(|k: i32| {
                let k = k as f64;
                (1.0 + (k - 1.0).powi(4)) / (2.0 * k - 1.0).powi(2)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((sq.condition_i_constant(16).unwrap() - brute).abs() < 1e-15);
        let single = DirectionSet::from_u("gap", &[10.0]).unwrap();
        assert!((single.condition_i_constant(1).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn lacunarity_witness() {
        let geo: Vec<f64> = (1..=20).map(|k| 0.5f64.powi(k)).collect();
        let w = is_lacunary(&geo);
        assert!(w.lacunary);
        assert_eq!(w.lambda, 0.5);

        let harmonic: Vec<f64> = (1..=20).map(|k| 1.0 / k as f64).collect();
        let w = is_lacunary(&harmonic);
        assert!((w.lambda - 19.0 / 20.0).abs() < 1e-12);
        let d = DirectionSet::from_slopes("1/k", &harmonic).unwrap();
        assert!(!d.diagnostics(20).unwrap().treated_as_lacunary);

        let one = is_lacunary(&[0.3]);
        assert!(one.lacunary);
        assert_eq!(one.lambda, 0.0);
    }
}
