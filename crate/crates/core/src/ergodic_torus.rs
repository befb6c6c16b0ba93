//! Two commuting circle rotations `S: x ↦ x + α`, `T: x ↦ x + β` on `[0, 1)`,
//! their rectangle averages `M_R f(x) = mean_{(i,j) ∈ R} f(x + iα + jβ)`,
//! the coboundary decay estimate and the orbit-sampling identity linking
//! `M_R` to the lattice averages of [`crate::discrete_maximal`].

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::discrete_maximal::{average, GridFunction, RectFamily};
use crate::error::{invalid, Error, Result};
use crate::geometry::TiltedRect;
use crate::lattice::{rect_points, IntBox};

/// Rotations by `α` and `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusSystem {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for TorusSystem {
    fn default() -> Self {
        Self {
            alpha: 2f64.sqrt() - 1.0,
            beta: 3f64.sqrt() - 1.0,
        }
    }
}

/// Denominator bound of the rational-dependence heuristic.
pub const RATIONAL_DENOMINATOR_LIMIT: u64 = 1_000_000;

/// A continued-fraction convergent `p/q` with `q` below `limit` and
/// `|qx − p| < 1e-9`, if one exists.
pub fn small_rational_approximant(x: f64, limit: u64) -> Option<(i64, u64)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if !a.is_finite() || a.abs() > 1e12 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 as u64 >= limit {
            break;
        }
        if (k2 as f64 * x - h2 as f64).abs() < 1e-9 {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

impl TorusSystem {
    /// Rejects `α`, `β` or `α/β` close to a rational with small denominator.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::NonFinite);
        }
        for (name, v) in [("alpha", alpha), ("beta", beta), ("alpha/beta", alpha / beta)] {
            if let Some((p, q)) = small_rational_approximant(v, RATIONAL_DENOMINATOR_LIMIT) {
                return Err(Error::RationallyDependent(format!("{name} = {v} ≈ {p}/{q}")));
            }
        }
        Ok(Self { alpha, beta })
    }

    /// `S^i T^j x`.
    #[inline]
    pub fn orbit(&self, x: f64, i: i64, j: i64) -> f64 {
        (x + i as f64 * self.alpha + j as f64 * self.beta).rem_euclid(1.0)
    }
}

/// Observables with known integral over `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ObservedFunction {
    /// `c + Σ a_k cos 2πkx + b_k sin 2πkx` with `terms = [(k, a_k, b_k)]`.
    Trig { constant: f64, terms: Vec<(i32, f64, f64)> },
    /// Indicator of `[a, b)`, `0 <= a < b <= 1`.
    Interval { a: f64, b: f64 },
    /// `c + g − g∘T`.
    Coboundary {
        constant: f64,
        g: Box<ObservedFunction>,
        #[serde(default)]
        beta: f64,
    },
}

impl ObservedFunction {
    pub fn cos(k: i32) -> Self {
        ObservedFunction::Trig {
            constant: 0.0,
            terms: vec![(k, 1.0, 0.0)],
        }
    }

    pub fn sin(k: i32) -> Self {
        ObservedFunction::Trig {
            constant: 0.0,
            terms: vec![(k, 0.0, 1.0)],
        }
    }

    pub fn constant(c: f64) -> Self {
        ObservedFunction::Trig {
            constant: c,
            terms: vec![],
        }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(invalid("interval", format!("need 0 <= a < b <= 1, got [{a}, {b})")));
        }
        Ok(ObservedFunction::Interval { a, b })
    }

    /// `c + g − g∘T` for the rotation `T` of `sys`.
    pub fn coboundary(constant: f64, g: ObservedFunction, sys: &TorusSystem) -> Self {
        ObservedFunction::Coboundary {
            constant,
            g: Box::new(g),
            beta: sys.beta,
        }
    }

    pub fn exact_integral(&self) -> f64 {
        match self {
            ObservedFunction::Trig { constant, .. } => *constant,
            ObservedFunction::Interval { a, b } => b - a,
            ObservedFunction::Coboundary { constant, .. } => *constant,
        }
    }

    fn constant_part(&self) -> f64 {
        match self {
            ObservedFunction::Trig { constant, .. } | ObservedFunction::Coboundary { constant, .. } => *constant,
            ObservedFunction::Interval { .. } => 0.0,
        }
    }

    /// `f(x) − constant_part`.
    fn fluctuation(&self, x: f64) -> f64 {
        match self {
            ObservedFunction::Trig { terms, .. } => terms
                .iter()
                .map(|&(k, a, b)| {
                    let t = TAU * k as f64 * x;
                    a * t.cos() + b * t.sin()
                })
                .sum(),
            ObservedFunction::Interval { a, b } => {
                let x = x.rem_euclid(1.0);
                if *a <= x && x < *b {
                    1.0
                } else {
                    0.0
                }
            }
            ObservedFunction::Coboundary { g, beta, .. } => g.eval(x) - g.eval((x + beta).rem_euclid(1.0)),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.constant_part() + self.fluctuation(x)
    }

    /// An upper bound for `sup |f|`, exact for single harmonics, intervals
    /// and constants.
    pub fn sup_abs(&self) -> f64 {
        match self {
            ObservedFunction::Trig { constant, terms } => {
                constant.abs() + terms.iter().map(|&(_, a, b)| a.hypot(b)).sum::<f64>()
            }
            ObservedFunction::Interval { .. } => 1.0,
            ObservedFunction::Coboundary { constant, g, .. } => constant.abs() + 2.0 * g.sup_abs(),
        }
    }
}

fn offsets_of(r: &TiltedRect) -> Result<Vec<(i64, i64)>> {
    let set = rect_points(r);
    if set.is_empty() {
        return Err(Error::EmptyLatticeSet);
    }
    Ok(set.points().to_vec())
}

/// `M_R f(x0)`, summed row-major over `R ∩ Z²`. Constants are returned
/// exactly: only the fluctuation around the constant part is averaged.
pub fn ergodic_average(sys: &TorusSystem, f: &ObservedFunction, r: &TiltedRect, x0: f64) -> Result<f64> {
    let offs = offsets_of(r)?;
    let s: f64 = offs.iter().map(|&(i, j)| f.fluctuation(sys.orbit(x0, i, j))).sum();
    Ok(f.constant_part() + s / offs.len() as f64)
}

/// `M_R|f|(x0)`.
pub fn ergodic_average_abs(sys: &TorusSystem, f: &ObservedFunction, r: &TiltedRect, x0: f64) -> Result<f64> {
    let offs = offsets_of(r)?;
    Ok(abs_sum(sys, f, &offs, x0) / offs.len() as f64)
}

fn abs_sum(sys: &TorusSystem, f: &ObservedFunction, offs: &[(i64, i64)], x0: f64) -> f64 {
    let mut s = 0.0;
    for &(i, j) in offs {
        s += f.eval(sys.orbit(x0, i, j)).abs();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoboundaryDecay {
    pub measured: f64,
    pub bound: f64,
    /// `#((R Δ (R + (0,1))) ∩ Z²)`.
    pub symmetric_difference: usize,
    pub count: usize,
}

impl CoboundaryDecay {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound + 1e-12
    }
}

/// `|M_R(g − g∘T)(x0)|` against `#(R Δ (R+(0,1)))/#R · sup|g|`.
pub fn coboundary_decay(sys: &TorusSystem, g: &ObservedFunction, r: &TiltedRect, x0: f64) -> Result<CoboundaryDecay> {
    let set = rect_points(r);
    if set.is_empty() {
        return Err(Error::EmptyLatticeSet);
    }
    let f = ObservedFunction::coboundary(0.0, g.clone(), sys);
    let measured = ergodic_average(sys, &f, r, x0)?.abs();
    let sd = set.symmetric_difference_len(&set.shift(0, 1));
    Ok(CoboundaryDecay {
        measured,
        bound: sd as f64 / set.len() as f64 * g.sup_abs(),
        symmetric_difference: sd,
        count: set.len(),
    })
}

/// `φ_x(k, l) = f(S^k T^l x)` for `|k|, |l| <= K`, zero elsewhere.
pub fn orbit_sampling(sys: &TorusSystem, f: &ObservedFunction, k_window: i64, x0: f64) -> GridFunction {
    GridFunction::from_fn(IntBox::new(-k_window, k_window, -k_window, k_window), |k, l| {
        f.eval(sys.orbit(x0, k, l))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferCheck {
    pub max_abs_error: f64,
    pub evaluations: usize,
}

/// Compares `A_R|φ_x|(k, l)` with `M_R|f|(S^k T^l x)` at the given points for
/// every member. Points whose translated rectangle leaves the `K`-window are
/// rejected.
pub fn transfer_check_at(
    sys: &TorusSystem,
    f: &ObservedFunction,
    fam: &RectFamily,
    k_window: i64,
    x0: f64,
    points: &[(i64, i64)],
) -> Result<TransferCheck> {
    let phi = orbit_sampling(sys, f, k_window, x0).abs();
    let rects = fam.rects();
    for &(k, l) in points {
        for (n, _) in rects.iter().enumerate() {
            let outside = fam
                .offsets(n)
                .iter()
                .any(|&(i, j)| (k + i).abs() > k_window || (l + j).abs() > k_window);
            if outside {
                return Err(Error::WindowViolated { k, l, rect: n });
            }
        }
    }
    let mut err = 0.0f64;
    let mut evaluations = 0;
    for &(k, l) in points {
        let y = sys.orbit(x0, k, l);
        for r in &rects {
            let lhs = average(&phi, r, (k, l))?;
            let rhs = ergodic_average_abs(sys, f, r, y)?;
            err = err.max((lhs - rhs).abs());
            evaluations += 1;
        }
    }
    Ok(TransferCheck {
        max_abs_error: err,
        evaluations,
    })
}

/// [`transfer_check_at`] over every `(k, l)` with `|k|, |l| <= K − m`, where
/// `m` bounds the family's offsets.
pub fn transfer_check(
    sys: &TorusSystem,
    f: &ObservedFunction,
    fam: &RectFamily,
    k_window: i64,
    x0: f64,
) -> Result<TransferCheck> {
    let o = fam.offset_box();
    let m = [o.x0, o.x1, o.y0, o.y1].iter().map(|v| v.abs()).max().unwrap_or(0);
    let inner = k_window - m;
    if inner < 0 {
        return Err(invalid("K", format!("window {k_window} smaller than offset bound {m}")));
    }
    let points: Vec<(i64, i64)> = (-inner..=inner)
        .flat_map(|l| (-inner..=inner).map(move |k| (k, l)))
        .collect();
    transfer_check_at(sys, f, fam, k_window, x0, &points)
}
