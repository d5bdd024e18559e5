//! Closed-form moments, central moments and the convergence-rate bounds.
//!
//! `closed_moments` evaluates the closed forms term for term, with the ratio
//! `e_mu(-n x) / e_mu(n x)` from [`e_ratio`]. `empirical_moments` sums the
//! operator series directly with exact Gamma moments and shares no algebra with
//! the closed forms. The two are the oracle pair for each other.

use std::collections::VecDeque;

use serde::Serialize;

use crate::dunkl::e_ratio;
use crate::error::{invalid, Result};
use crate::function::{Lipschitz, ScalarFunction};
use crate::operators::{apply_central, apply_monomial, apply_with_order, OperatorConfig};
use crate::quadrature::{CHECK_ORDER, DEFAULT_ORDER};

/// Right end of the window on which grid moduli and sup norms are taken.
pub const X_MAX: f64 = 8.0;
/// Grid step for moduli, refined to `delta / 50` when `delta` is small.
pub const GRID_STEP: f64 = 1e-3;
/// Allowance for evaluation error (truncation and quadrature) when checking
/// `err <= bound`; scaled by `1 + |f(x)|`.
pub const EVAL_SLACK: f64 = 1e-10;

/// Raw and central moments of the operator at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub x: f64,
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub omega1: f64,
    pub omega2c: f64,
    pub lambda_n: f64,
}

impl MomentReport {
    /// Largest relative difference over `m1, m2, omega1, omega2c`.
    pub fn max_rel_discrepancy(&self, other: &MomentReport) -> f64 {
        [(self.m1, other.m1), (self.m2, other.m2), (self.omega1, other.omega1), (self.omega2c, other.omega2c)]
            .iter()
            .map(|&(a, b)| rel_diff(a, b))
            .fold(0.0, f64::max)
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Moments from the closed-form expressions in `A(+-1)`, `A'(+-1)`, `A''(1)`.
pub fn closed_moments(config: &OperatorConfig, x: f64) -> MomentReport {
    let s = config.scalars();
    let n = config.n() as f64;
    let mu = config.mu();
    let lam = config.lambda();
    let r = e_ratio(mu, n * x);
    let odd_gap = (s.a1 - s.am1) / s.a1;
    let ap = s.ap1 / s.a1;
    let app = s.app1 / s.a1;
    let ap_sym = (s.ap1 + s.apm1) / s.a1;

    let shift = mu / n * r * odd_gap + (ap + lam + 1.0) / n;
    let m1 = x + shift;
    let m2 = x * x
        + x / n * (2.0 * mu * r * s.am1 / s.a1 + 2.0 * ap + 2.0 * lam + 4.0)
        + 2.0 * mu / (n * n) * r * ap_sym
        + 2.0 * mu * mu / (n * n) * odd_gap
        + mu / (n * n) * (2.0 * lam + 3.0) * r * odd_gap
        + (app + (2.0 * lam + 4.0) * ap + (lam + 1.0) * (lam + 2.0)) / (n * n);
    let omega2c = 2.0 * x / n * (1.0 + mu * r * (2.0 * s.am1 - s.a1) / s.a1)
        + r / (n * n) * (2.0 * mu * ap_sym + mu * (2.0 * lam + 3.0) * odd_gap)
        + (app + 2.0 * (lam + 2.0) * ap + (lam + 1.0) * (lam + 2.0)) / (n * n)
        + 2.0 * mu * mu / (n * n) * odd_gap;
    MomentReport { x, m0: 1.0, m1, m2, omega1: shift, omega2c, lambda_n: shift + omega2c / 2.0 }
}

/// Moments by direct summation of the operator series with exact Gamma moments.
pub fn empirical_moments(config: &OperatorConfig, x: f64) -> Result<MomentReport> {
    let m0 = apply_monomial(config, 0, x)?;
    let m1 = apply_monomial(config, 1, x)?;
    let m2 = apply_monomial(config, 2, x)?;
    let omega1 = apply_central(config, 1, x)?;
    let omega2c = apply_central(config, 2, x)?;
    Ok(MomentReport { x, m0, m1, m2, omega1, omega2c, lambda_n: omega1 + omega2c / 2.0 })
}

fn check_grid(delta: f64, step: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    if !(step > 0.0 && step <= delta / 50.0) {
        return Err(invalid("step", format!("need 0 < step <= delta / 50, got step = {step}, delta = {delta}")));
    }
    Ok(())
}

fn sample(f: &ScalarFunction, upper: f64, step: f64) -> Vec<f64> {
    let count = (upper / step).floor() as usize + 1;
    (0..count).map(|i| f.eval(i as f64 * step)).collect()
}

/// Modulus of continuity `omega(f; delta)`: the analytic value when known, else
/// the grid estimate of [`grid_modulus`].
pub fn modulus(f: &ScalarFunction, delta: f64, xmax: f64, step: f64) -> Result<f64> {
    match f.known_modulus(delta) {
        Some(w) => Ok(w),
        None => grid_modulus(f, delta, xmax, step),
    }
}

/// Largest `|f(u) - f(v)|` over grid points `u, v` in `[0, xmax]` with
/// `|u - v| <= delta`; a lower estimate of the true modulus.
pub fn grid_modulus(f: &ScalarFunction, delta: f64, xmax: f64, step: f64) -> Result<f64> {
    check_grid(delta, step)?;
    let values = sample(f, xmax, step);
    let width = (delta / step + 1e-9).floor() as usize;
    // sliding-window max - min over windows of width + 1 points
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        while hi.back().is_some_and(|&j| values[j] <= v) {
            hi.pop_back();
        }
        while lo.back().is_some_and(|&j| values[j] >= v) {
            lo.pop_back();
        }
        hi.push_back(i);
        lo.push_back(i);
        while hi.front().is_some_and(|&j| j + width < i) {
            hi.pop_front();
        }
        while lo.front().is_some_and(|&j| j + width < i) {
            lo.pop_front();
        }
        best = best.max(values[hi[0]] - values[lo[0]]);
    }
    Ok(best)
}

/// Second modulus `omega_2(f; delta)`: analytic when known, else [`grid_second_modulus`].
pub fn second_modulus(f: &ScalarFunction, delta: f64, xmax: f64, step: f64) -> Result<f64> {
    match f.known_second_modulus(delta) {
        Some(w) => Ok(w),
        None => grid_second_modulus(f, delta, xmax, step),
    }
}

/// Largest `|f(u + 2t) - 2 f(u + t) + f(u)|` over grid `u` in `[0, xmax]` and grid
/// `0 < t <= delta`.
pub fn grid_second_modulus(f: &ScalarFunction, delta: f64, xmax: f64, step: f64) -> Result<f64> {
    check_grid(delta, step)?;
    let shifts = (delta / step + 1e-9).floor() as usize;
    let values = sample(f, xmax + 2.0 * shifts as f64 * step + step, step);
    let base = (xmax / step).floor() as usize + 1;
    let mut best = 0.0f64;
    for h in 1..=shifts {
        for i in 0..base {
            let d = values[i + 2 * h] - 2.0 * values[i + h] + values[i];
            best = best.max(d.abs());
        }
    }
    Ok(best)
}

/// `sup |f|` on `[0, inf)`: the declared norm, else the maximum on the window grid.
pub fn sup_norm(f: &ScalarFunction, xmax: f64, step: f64) -> f64 {
    f.sup_norm().unwrap_or_else(|| sample(f, xmax, step).iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Which inequality a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// `|D f - f| <= 2 omega(f; sqrt(Omega_2))`.
    ModulusOfContinuity,
    /// `|D f - f| <= M Omega_2^{alpha / 2}`.
    Lipschitz,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub kind: BoundKind,
    pub err: f64,
    pub bound: f64,
}

/// Measured error and the three rate bounds at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub x: f64,
    pub value: f64,
    pub err: f64,
    pub bound_t31: f64,
    /// False when `bound_t31` came from a grid (lower) estimate and was not asserted.
    pub t31_checked: bool,
    pub bound_lip: Option<f64>,
    pub bound_peetre_rhs: f64,
    pub ratio_peetre: f64,
    /// `|value(Q = 96) - value(Q = 48)|` for non-smooth functions.
    pub quad_discrepancy: Option<f64>,
    pub violations: Vec<Violation>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Measure `|D_n^*(f; x) - f(x)|` and check it against the rate bounds.
pub fn verify_bounds(
    config: &OperatorConfig,
    f: &ScalarFunction,
    x: f64,
    lipschitz: Option<Lipschitz>,
) -> Result<BoundReport> {
    verify_bounds_with(config, f, x, lipschitz, &closed_moments(config, x))
}

/// As [`verify_bounds`], with caller-supplied central moments.
pub fn verify_bounds_with(
    config: &OperatorConfig,
    f: &ScalarFunction,
    x: f64,
    lipschitz: Option<Lipschitz>,
    moments: &MomentReport,
) -> Result<BoundReport> {
    let (value, quad_discrepancy) = if f.is_smooth() {
        (apply_with_order(config, f, x, config.quad_order())?, None)
    } else {
        let hi = apply_with_order(config, f, x, CHECK_ORDER.max(config.quad_order()))?;
        let lo = apply_with_order(config, f, x, DEFAULT_ORDER)?;
        (hi, Some((hi - lo).abs()))
    };
    let fx = f.eval(x);
    let err = (value - fx).abs();
    let slack = EVAL_SLACK * (1.0 + fx.abs());
    let mut violations = Vec::new();

    let delta = moments.omega2c.sqrt();
    let (bound_t31, t31_checked) = match f.known_modulus(delta) {
        Some(w) => (2.0 * w, true),
        None if delta > 0.0 => (2.0 * grid_modulus(f, delta, X_MAX, GRID_STEP.min(delta / 50.0))?, false),
        None => (f64::NAN, false),
    };
    if t31_checked && !(err <= bound_t31 + slack) {
        violations.push(Violation { kind: BoundKind::ModulusOfContinuity, err, bound: bound_t31 });
    }

    let bound_lip = lipschitz.map(|l| l.constant * moments.omega2c.powf(l.exponent / 2.0));
    if let Some(b) = bound_lip {
        if !(err <= b + slack) {
            violations.push(Violation { kind: BoundKind::Lipschitz, err, bound: b });
        }
    }

    let half = moments.lambda_n / 2.0;
    let norm = sup_norm(f, X_MAX, GRID_STEP);
    let w2 = if half > 0.0 {
        let d = half.sqrt();
        second_modulus(f, d, X_MAX, GRID_STEP.min(d / 50.0))?
    } else {
        0.0
    };
    let bound_peetre_rhs = half.min(1.0) * norm + w2;
    let ratio_peetre = if bound_peetre_rhs > 0.0 {
        err / bound_peetre_rhs
    } else if err == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };

    Ok(BoundReport {
        x,
        value,
        err,
        bound_t31,
        t31_checked,
        bound_lip,
        bound_peetre_rhs,
        ratio_peetre,
        quad_discrepancy,
        violations,
    })
}

/// `max_x |D_n^*(t^j; x) - x^j|` over the given points, from exact moments.
pub fn sup_moment_error(config: &OperatorConfig, j: u32, xs: &[f64]) -> Result<f64> {
    xs.iter().try_fold(0.0f64, |acc, &x| Ok(acc.max((apply_monomial(config, j, x)? - x.powi(j as i32)).abs())))
}

/// The parameter grid used by the moment-equivalence and bound checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub mus: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub ns: Vec<u64>,
    pub xs: Vec<f64>,
    pub families: Vec<String>,
}

impl Sweep {
    /// `mu` in {0, 0.5, 1.5}, `lambda` in {0, 0.7}, `n` in {1, 4, 16, 64, 256},
    /// `x` in {0.1, 0.5, 1, 2, 5} and all four catalog families: 600 points.
    pub fn standard() -> Self {
        Self {
            mus: vec![0.0, 0.5, 1.5],
            lambdas: vec![0.0, 0.7],
            ns: vec![1, 4, 16, 64, 256],
            xs: vec![0.1, 0.5, 1.0, 2.0, 5.0],
            families: crate::appell::CATALOG_IDS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mus.len() * self.lambdas.len() * self.ns.len() * self.xs.len() * self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One configuration per (family, mu, lambda, n), sharing a rule cache, in a
    /// fixed order.
    pub fn configs(&self) -> Result<Vec<OperatorConfig>> {
        let rules = std::sync::Arc::new(crate::quadrature::RuleCache::new());
        let mut out = Vec::new();
        for id in &self.families {
            for &mu in &self.mus {
                let family = crate::appell::AppellFamily::catalog(id, mu)?;
                for &lambda in &self.lambdas {
                    let base = OperatorConfig::new(self.ns[0], lambda, family.clone())?
                        .with_rule_cache(std::sync::Arc::clone(&rules));
                    for &n in &self.ns {
                        out.push(base.with_n(n)?);
                    }
                }
            }
        }
        Ok(out)
    }
}
