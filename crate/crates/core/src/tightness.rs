//! Tightness ratios: each relation's left side divided by its own lower bound.
//!
//! `ti1` uses the Heisenberg-type bound (commutator term plus the mixedness
//! term), `ti2` the entropic bound and `ti3` the sum relation. A ratio is
//! `None` where its bound vanishes.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{analytic_state, evolve_to, FeedbackParams};
use crate::pauli::PauliObservable;
use crate::relations::{eq19_bound, eur_check, sum_relation, variance_product};
use crate::state::QubitState;
use crate::tolerances;

fn ratio(numerator: f64, bound: f64) -> Option<f64> {
    (bound > tolerances::TIGHTNESS_DENOMINATOR).then(|| numerator / bound)
}

pub fn ti1(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Option<f64> {
    ratio(variance_product(s, a, b), eq19_bound(s, a, b))
}

pub fn ti2(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Result<Option<f64>> {
    let eur = eur_check(s, a, b)?;
    Ok((!eur.zero_bound).then(|| eur.entropy_sum / eur.bound))
}

pub fn ti3(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Option<f64> {
    let (lhs, bound) = sum_relation(s, a, b);
    ratio(lhs, bound)
}

/// Closed-form Ti₁ for A = σx, B = σz, λ = 1, as a function of (α, t).
pub fn ti1_analytic_lambda1(alpha: f64, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let c2 = (2.0 * alpha).cos();
    let s2 = (2.0 * alpha).sin();
    let numerator = (-1.0 + (3.0 * t).exp() + 3.0 * c2).powi(2) * s2 * s2;
    let denominator = 8.0 * (7.0 * t).exp()
        - t.exp() * (1.0 - 3.0 * c2).powi(2)
        - 2.0 * (4.0 * t).exp() * (3.0 * c2 - 1.0)
        - 9.0 * (6.0 * t).exp() * s2 * s2;
    Ok(1.0 + numerator / denominator)
}

/// Closed-form Ti₁ for A = σx, B = σz, α = π/4, as a function of (λ, t).
pub fn ti1_analytic_alpha_pi4(lambda: f64, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let l2 = lambda * lambda;
    let e = (t + 2.0 * t * l2).exp();
    let numerator = -(-t).exp_m1() * (1.0 + 2.0 * e * l2) * (2.0 * e * (1.0 + l2) - 1.0);
    let denominator =
        e * (2.0 + (2.0 * t * l2).exp() * (4.0 * l2 * t.exp_m1() * (l2 + 1.0) - 1.0)) - 1.0;
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessPoint {
    pub alpha: f64,
    pub t: f64,
    pub lambda: f64,
    pub ti1: Option<f64>,
    pub ti2: Option<f64>,
    pub ti3: Option<f64>,
}

impl TightnessPoint {
    pub fn evaluate(
        alpha: f64,
        lambda: f64,
        t: f64,
        s: &QubitState,
        a: &PauliObservable,
        b: &PauliObservable,
    ) -> Self {
        Self {
            alpha,
            t,
            lambda,
            ti1: ti1(s, a, b),
            // Degenerate observables have no entropic bound; mark undefined.
            ti2: ti2(s, a, b).ok().flatten(),
            ti3: ti3(s, a, b),
        }
    }
}

/// Evenly spaced values from `lo` to `hi` inclusive; `steps = 1` pins the axis at `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn range(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn fixed(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            steps: 1,
        }
    }

    /// `n` interior points of (lo, hi): lo + k (hi − lo)/(n + 1), k = 1..n.
    pub fn open(lo: f64, hi: f64, n: usize) -> Self {
        let h = (hi - lo) / (n as f64 + 1.0);
        Self::range(lo + h, hi - h, n)
    }

    /// `n` points of (lo, hi], excluding lo: lo + k (hi − lo)/n, k = 1..n.
    pub fn open_closed(lo: f64, hi: f64, n: usize) -> Self {
        Self::range(lo + (hi - lo) / n as f64, hi, n)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::BadGrid(format!("{name}: bounds must be finite")));
        }
        match self.steps {
            0 => Err(Error::BadGrid(format!("{name}: steps must be at least 1"))),
            1 => Ok(()),
            _ if self.lo < self.hi => Ok(()),
            _ => Err(Error::BadGrid(format!(
                "{name}: need lo < hi, got [{}, {}]",
                self.lo, self.hi
            ))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k == self.steps - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub alpha: GridAxis,
    pub lambda: GridAxis,
    pub t: GridAxis,
    pub omega: f64,
    pub a: PauliObservable,
    pub b: PauliObservable,
}

impl SweepGrid {
    /// (α, t) over (0, π) × (0, 3] at λ = 1 with A = σx, B = σz.
    pub fn fig2(steps: usize) -> Self {
        Self {
            alpha: GridAxis::open(0.0, PI, steps),
            lambda: GridAxis::fixed(1.0),
            t: GridAxis::open_closed(0.0, 3.0, steps),
            omega: 0.0,
            a: PauliObservable::sigma_x(),
            b: PauliObservable::sigma_z(),
        }
    }

    /// (λ, t) over (0, 1] × (0, 3] at α = π/4 with A = σx, B = σz.
    pub fn fig3(steps: usize) -> Self {
        Self {
            alpha: GridAxis::fixed(FRAC_PI_4),
            lambda: GridAxis::open_closed(0.0, 1.0, steps),
            t: GridAxis::open_closed(0.0, 3.0, steps),
            omega: 0.0,
            a: PauliObservable::sigma_x(),
            b: PauliObservable::sigma_z(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha.validate("alpha")?;
        self.lambda.validate("lambda")?;
        self.t.validate("t")?;
        if self.t.lo < 0.0 {
            return Err(Error::BadGrid("t: lower bound must be >= 0".into()));
        }
        if self.lambda.lo < 0.0 {
            return Err(Error::BadGrid("lambda: lower bound must be >= 0".into()));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::BadGrid(format!(
                "omega = {} must be >= 0",
                self.omega
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.alpha.steps * self.lambda.steps * self.t.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SweepSource {
    /// Closed-form states; requires Ω = 0.
    Analytic,
    /// RK4 states with the given step.
    Numeric { step: f64 },
}

/// Evaluates the three ratios over the grid.
///
/// Points are ordered α-major, then λ, then t, independent of how the
/// work is scheduled.
pub fn sweep(grid: &SweepGrid, source: SweepSource) -> Result<Vec<TightnessPoint>> {
    grid.validate()?;
    if matches!(source, SweepSource::Analytic) && grid.omega != 0.0 {
        return Err(Error::DrivenAnalytic(grid.omega));
    }
    let times = grid.t.values();
    let lines: Vec<(f64, f64)> = grid
        .alpha
        .values()
        .into_iter()
        .flat_map(|alpha| grid.lambda.values().into_iter().map(move |l| (alpha, l)))
        .collect();

    let rows: Vec<Vec<TightnessPoint>> = lines
        .par_iter()
        .map(|&(alpha, lambda)| {
            let params = FeedbackParams::new(grid.omega, lambda, alpha)?;
            let states = match source {
                SweepSource::Analytic => times
                    .iter()
                    .map(|&t| analytic_state(&params, t))
                    .collect::<Result<Vec<_>>>()?,
                SweepSource::Numeric { step } => evolve_to(&params, &times, step)?,
            };
            Ok(times
                .iter()
                .zip(&states)
                .map(|(&t, s)| TightnessPoint::evaluate(alpha, lambda, t, s, &grid.a, &grid.b))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Counts of points where Ti₁ fails to be the tightest of the three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OrderingSummary {
    pub total_points: usize,
    /// Points where all three ratios are defined.
    pub all_defined: usize,
    pub ti1_gt_ti2: usize,
    pub ti1_gt_ti3: usize,
    /// Points violating either ordering.
    pub violations: usize,
    /// Defined values of any ratio below 1 − tolerance.
    pub below_one: usize,
}

pub fn ordering_summary(points: &[TightnessPoint]) -> OrderingSummary {
    let tol = tolerances::TIGHTNESS_ORDER;
    let mut summary = OrderingSummary {
        total_points: points.len(),
        ..Default::default()
    };
    for p in points {
        summary.below_one += [p.ti1, p.ti2, p.ti3]
            .iter()
            .flatten()
            .filter(|&&v| v < 1.0 - tol)
            .count();
        let (Some(t1), Some(t2), Some(t3)) = (p.ti1, p.ti2, p.ti3) else {
            continue;
        };
        summary.all_defined += 1;
        let over2 = t1 > t2 + tol;
        let over3 = t1 > t3 + tol;
        summary.ti1_gt_ti2 += usize::from(over2);
        summary.ti1_gt_ti3 += usize::from(over3);
        summary.violations += usize::from(over2 || over3);
    }
    summary
}
