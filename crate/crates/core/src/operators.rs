//! Pointwise evaluation of the Dunkl-Gamma operators built on Dunkl-Appell
//! polynomials, their two reductions and the two sampling-type operators they
//! generalize.
//!
//! At a point `x` every Durrmeyer-type operator here has the shape
//! `sum_k w_k(x) E_k[f]`, where `w_k` is a probability sequence and `E_k` is the
//! expectation under the Gamma density with shape `m_k + 1` and rate `n`. For the
//! main operator
//!
//! ```text
//! w_k(x) = p_k(n x) / (gamma_mu(k) e_mu(n x) A(1)),   m_k = k + 2 mu theta(k) + lambda.
//! ```
//!
//! Series are cut with a mass certificate: summation runs at least to
//! `n x + 10 sqrt(n x + 1) + deg A` and stops at the first index after that where
//! the accumulated weight exceeds `1 - eps`. The achieved sum is the certificate,
//! the index heuristic only decides where to start checking it.

use std::sync::{Arc, RwLock};

use crate::appell::{AppellFamily, AppellScalars};
use crate::dunkl::{cap_for_argument, shifted_index, DunklIndex, GammaTable};
use crate::error::{invalid, Error, Result};
use crate::function::ScalarFunction;
use crate::numeric::{k_log, CompensatedSum};
use crate::quadrature::{gamma_expectation, gamma_moment_exact, RuleCache, DEFAULT_ORDER};

/// Tolerance for the `ln e_mu` normalizer; well below any weight that matters.
const LOG_E_TOL: f64 = 1e-18;

/// Weights below this are not integrated. Their total is far below any `eps`.
const WEIGHT_FLOOR: f64 = 1e-30;

/// Series truncation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub eps: f64,
    pub k_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { eps: 1e-12, k_cap: 1_000_000 }
    }
}

impl TruncationPolicy {
    pub fn new(eps: f64, k_cap: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid("eps", format!("must lie in (0, 1), got {eps}")));
        }
        if k_cap == 0 {
            return Err(invalid("k_cap", "must be at least 1"));
        }
        Ok(Self { eps, k_cap })
    }
}

/// Truncated operator weights at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightProfile {
    pub x: f64,
    /// Index of the last weight kept.
    pub k_used: usize,
    /// `w_0 ..= w_{k_used}`.
    pub weights: Vec<f64>,
    /// `|1 - sum w_k|`, certified to be at most `eps`.
    pub tail_mass: f64,
}

impl WeightProfile {
    pub fn total(&self) -> f64 {
        let mut s = CompensatedSum::new();
        self.weights.iter().for_each(|&w| s.add(w));
        s.value()
    }
}

/// Gamma table shared by clones of a configuration; grows on demand.
#[derive(Debug)]
struct SharedTable {
    mu: f64,
    table: RwLock<Arc<GammaTable>>,
}

impl SharedTable {
    fn new(initial: Arc<GammaTable>) -> Self {
        Self { mu: initial.mu(), table: RwLock::new(initial) }
    }

    fn at_least(&self, cap: usize) -> Result<Arc<GammaTable>> {
        {
            let t = self.table.read().expect("gamma table lock poisoned");
            if t.cap() >= cap {
                return Ok(Arc::clone(&t));
            }
        }
        let mut t = self.table.write().expect("gamma table lock poisoned");
        if t.cap() < cap {
            *t = Arc::new(GammaTable::new(self.mu, cap.max(2 * t.cap()))?);
        }
        Ok(Arc::clone(&t))
    }
}

/// Everything that fixes the operator: `n`, `lambda`, `mu` (through the family),
/// truncation and quadrature order.
#[derive(Debug, Clone)]
pub struct OperatorConfig {
    n: u64,
    lambda: f64,
    family: AppellFamily,
    trunc: TruncationPolicy,
    quad_order: usize,
    symbol: Arc<Vec<f64>>,
    scalars: AppellScalars,
    table: Arc<SharedTable>,
    rules: Arc<RuleCache>,
}

impl OperatorConfig {
    pub fn new(n: u64, lambda: f64, family: AppellFamily) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be a positive integer"));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
        }
        DunklIndex::for_operator(family.mu())?;
        Ok(Self {
            n,
            lambda,
            symbol: Arc::new(family.symbol_coeffs()),
            scalars: family.scalars(),
            table: Arc::new(SharedTable::new(Arc::clone(family.table()))),
            family,
            trunc: TruncationPolicy::default(),
            quad_order: DEFAULT_ORDER,
            rules: Arc::new(RuleCache::new()),
        })
    }

    pub fn with_trunc(mut self, trunc: TruncationPolicy) -> Self {
        self.trunc = trunc;
        self
    }

    pub fn with_quad_order(mut self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("quad_order", "must be at least 1"));
        }
        self.quad_order = order;
        Ok(self)
    }

    /// Share a rule cache with other configurations.
    pub fn with_rule_cache(mut self, rules: Arc<RuleCache>) -> Self {
        self.rules = rules;
        self
    }

    /// Same operator with a different `n`, sharing tables and caches.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be a positive integer"));
        }
        let mut c = self.clone();
        c.n = n;
        Ok(c)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.family.mu()
    }

    pub fn family(&self) -> &AppellFamily {
        &self.family
    }

    pub fn trunc(&self) -> TruncationPolicy {
        self.trunc
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    pub fn scalars(&self) -> AppellScalars {
        self.scalars
    }

    pub fn rules(&self) -> &Arc<RuleCache> {
        &self.rules
    }

    /// Series options equivalent to this configuration, for the reduction operators.
    pub fn series_options(&self) -> SeriesOptions {
        SeriesOptions { trunc: self.trunc, quad_order: self.quad_order, rules: Arc::clone(&self.rules) }
    }

    /// Gamma shape offset `m_k = k + 2 mu theta(k) + lambda` of the k-th integral.
    #[inline]
    pub fn shape(&self, k: usize) -> f64 {
        shifted_index(k, self.mu()) + self.lambda
    }

    fn n_f64(&self) -> f64 {
        self.n as f64
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid("x", format!("must be finite and >= 0, got {x}")))
    }
}

fn start_index(y: f64, degree: usize) -> f64 {
    y + 10.0 * (y + 1.0).sqrt() + degree as f64
}

/// The certificate cannot be reached before `k_cap` when the start index is past it.
fn check_reachable(x: f64, y: f64, degree: usize, trunc: TruncationPolicy) -> Result<()> {
    if start_index(y, degree) >= trunc.k_cap as f64 {
        return Err(Error::Truncation { x, k_cap: trunc.k_cap, mass: 0.0, eps: trunc.eps });
    }
    Ok(())
}

/// Push weights produced by `weight(k)` until the mass certificate holds.
fn certified_series<W>(x: f64, y: f64, degree: usize, trunc: TruncationPolicy, mut weight: W) -> Result<WeightProfile>
where
    W: FnMut(usize) -> Result<f64>,
{
    let start = start_index(y, degree);
    let mut sum = CompensatedSum::new();
    let mut weights = Vec::with_capacity(start as usize + 8);
    for k in 0..trunc.k_cap {
        let w = weight(k)?;
        weights.push(w);
        sum.add(w);
        if k as f64 >= start && sum.value() > 1.0 - trunc.eps {
            return Ok(WeightProfile { x, k_used: k, weights, tail_mass: (1.0 - sum.value()).abs() });
        }
    }
    Err(Error::Truncation { x, k_cap: trunc.k_cap, mass: sum.value(), eps: trunc.eps })
}

/// `ln` of the Dunkl-Poisson weights `y^j / (gamma_mu(j) e_mu(y))` for `j <= cap`.
struct DunklPoisson {
    log_y: f64,
    log_norm: f64,
    zero: bool,
    table: Arc<GammaTable>,
}

impl DunklPoisson {
    fn new(table: Arc<GammaTable>, y: f64) -> Result<Self> {
        Ok(Self { log_y: y.ln(), log_norm: table.log_e_mu(y, LOG_E_TOL)?, zero: y == 0.0, table })
    }

    #[inline]
    fn weight(&self, j: usize) -> f64 {
        if self.zero {
            return if j == 0 { 1.0 } else { 0.0 };
        }
        (k_log(j, self.log_y) - self.table.log_at(j) - self.log_norm).exp()
    }
}

/// Operator weights `w_k(x)` with a certified tail.
pub fn weights(config: &OperatorConfig, x: f64) -> Result<WeightProfile> {
    check_x(x)?;
    let y = config.n_f64() * x;
    let degree = config.family.degree();
    check_reachable(x, y, degree, config.trunc)?;
    let cap = cap_for_argument(y).max(start_index(y, degree) as usize + degree + 64);
    let mut table = config.table.at_least(cap)?;
    let mut poisson = DunklPoisson::new(Arc::clone(&table), y)?;
    let symbol = Arc::clone(&config.symbol);
    let mut q: Vec<f64> = Vec::new();
    certified_series(x, y, degree, config.trunc, |k| {
        if k > table.cap() {
            table = config.table.at_least(2 * k)?;
            poisson.table = Arc::clone(&table);
        }
        q.push(poisson.weight(k));
        // w_k = sum_r b_r q_{k-r}, the Cauchy product of the symbol and e_mu series
        Ok(symbol.iter().take(k + 1).enumerate().map(|(r, &b)| b * q[k - r]).sum())
    })
}

fn integrate_profile<F>(profile: &WeightProfile, config: &OperatorConfig, order: usize, f: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let n = config.n_f64();
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        if w <= WEIGHT_FLOOR {
            continue;
        }
        let m = config.shape(k);
        let rule = config.rules.get(m, order)?;
        acc.add(w * gamma_expectation(&f, m, n, &rule));
    }
    Ok(acc.value())
}

/// `D_n^*(f; x)`.
pub fn apply(config: &OperatorConfig, f: &ScalarFunction, x: f64) -> Result<f64> {
    apply_with_order(config, f, x, config.quad_order)
}

/// `D_n^*(f; x)` with an explicit quadrature order.
pub fn apply_with_order(config: &OperatorConfig, f: &ScalarFunction, x: f64, order: usize) -> Result<f64> {
    let profile = weights(config, x)?;
    integrate_profile(&profile, config, order, |t| f.eval(t))
}

/// `D_n^*(t^j; x)` for `j <= 4` from exact Gamma moments, without quadrature.
pub fn apply_monomial(config: &OperatorConfig, j: u32, x: f64) -> Result<f64> {
    if j > 4 {
        return Err(invalid("j", format!("monomial degree must be <= 4, got {j}")));
    }
    let profile = weights(config, x)?;
    let n = config.n_f64();
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        acc.add(w * gamma_moment_exact(j, config.shape(k), n));
    }
    Ok(acc.value())
}

/// Central moments `D_n^*((t - x)^j; x)` for `j` in `{1, 2}`, summed term by term
/// in a cancellation-free form: per index, mean minus `x` and variance plus squared bias.
pub fn apply_central(config: &OperatorConfig, j: u32, x: f64) -> Result<f64> {
    if !(j == 1 || j == 2) {
        return Err(invalid("j", format!("central moment order must be 1 or 2, got {j}")));
    }
    let profile = weights(config, x)?;
    let n = config.n_f64();
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        let m = config.shape(k);
        let bias = (m + 1.0) / n - x;
        let term = if j == 1 { bias } else { (m + 1.0) / (n * n) + bias * bias };
        acc.add(w * term);
    }
    Ok(acc.value())
}

/// Truncation, quadrature and caching options for the stand-alone operators.
#[derive(Debug, Clone)]
pub struct SeriesOptions {
    pub trunc: TruncationPolicy,
    pub quad_order: usize,
    pub rules: Arc<RuleCache>,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { trunc: TruncationPolicy::default(), quad_order: DEFAULT_ORDER, rules: Arc::new(RuleCache::new()) }
    }
}

fn check_n_lambda(n: u64, lambda: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "must be a positive integer"));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
    }
    Ok(())
}

fn dunkl_poisson_profile(n: u64, mu: f64, x: f64, trunc: TruncationPolicy) -> Result<WeightProfile> {
    check_x(x)?;
    let mu = DunklIndex::for_operator(mu)?.get();
    let y = n as f64 * x;
    check_reachable(x, y, 0, trunc)?;
    let cap = cap_for_argument(y).max(start_index(y, 0) as usize + 64);
    let mut poisson = DunklPoisson::new(Arc::new(GammaTable::new(mu, cap)?), y)?;
    certified_series(x, y, 0, trunc, |k| {
        if k > poisson.table.cap() {
            poisson.table = Arc::new(GammaTable::new(mu, 2 * k)?);
        }
        Ok(poisson.weight(k))
    })
}

/// Dunkl analogue of the Szász-Durrmeyer operator, `D_n(f; x)`: the constant-symbol
/// case written out with `p_k(y) = y^k`.
pub fn wafi_rao_apply(n: u64, lambda: f64, mu: f64, f: &ScalarFunction, x: f64, opts: &SeriesOptions) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    let profile = dunkl_poisson_profile(n, mu, x, opts.trunc)?;
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        if w <= WEIGHT_FLOOR {
            continue;
        }
        let m = shifted_index(k, mu) + lambda;
        let rule = opts.rules.get(m, opts.quad_order)?;
        acc.add(w * gamma_expectation(|t| f.eval(t), m, nf, &rule));
    }
    Ok(acc.value())
}

/// Classical Appell symbol `g(t) = sum_r g_r t^r`, normalized so `g(1) = 1`.
fn classical_symbol(g_coeffs: &[f64]) -> Result<Vec<f64>> {
    if g_coeffs.is_empty() || g_coeffs[0] == 0.0 {
        return Err(Error::InvalidFamily("need g_0 != 0".into()));
    }
    let g1: f64 = g_coeffs.iter().sum();
    if g1 == 0.0 || !g1.is_finite() {
        return Err(Error::InvalidFamily(format!("g(1) = {g1} is not a usable normalizer")));
    }
    let g: Vec<f64> = g_coeffs.iter().map(|c| c / g1).collect();
    if g.iter().any(|&c| c < 0.0) {
        return Err(Error::InvalidFamily("coefficients g_r / g(1) must be nonnegative".into()));
    }
    Ok(g)
}

/// `e^{-y} p_k(y) / g(1)` for the classical Appell polynomials of `g`, where
/// `g(t) e^{y t} = sum_k p_k(y) t^k`.
fn classical_appell_profile(n: u64, g: &[f64], x: f64, trunc: TruncationPolicy) -> Result<WeightProfile> {
    check_x(x)?;
    let y = n as f64 * x;
    let degree = g.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    check_reachable(x, y, degree, trunc)?;
    let log_y = y.ln();
    let mut log_fact = vec![0.0];
    let mut acc = CompensatedSum::new();
    let mut poisson: Vec<f64> = Vec::new();
    certified_series(x, y, degree, trunc, |k| {
        if k > 0 {
            acc.add((k as f64).ln());
            log_fact.push(acc.value());
        }
        let p = if y == 0.0 {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (k_log(k, log_y) - log_fact[k] - y).exp()
        };
        poisson.push(p);
        Ok(g.iter().take(k + 1).enumerate().map(|(r, &c)| c * poisson[k - r]).sum())
    })
}

/// Durrmeyer-type Appell operator `P_n(f; x)`, built with factorials and
/// `e^{-n x}` throughout; the `mu = 0` case of the main operator when
/// `g_r = a_r / r!`.
pub fn ciupa_apply(
    n: u64,
    lambda: f64,
    g_coeffs: &[f64],
    f: &ScalarFunction,
    x: f64,
    opts: &SeriesOptions,
) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    let g = classical_symbol(g_coeffs)?;
    let profile = classical_appell_profile(n, &g, x, opts.trunc)?;
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        if w <= WEIGHT_FLOOR {
            continue;
        }
        let m = k as f64 + lambda;
        let rule = opts.rules.get(m, opts.quad_order)?;
        acc.add(w * gamma_expectation(|t| f.eval(t), m, nf, &rule));
    }
    Ok(acc.value())
}

/// Dunkl analogue of the Szász operator, sampling `f` at `(k + 2 mu theta(k)) / n`.
pub fn sampling_szasz_dunkl(n: u64, mu: f64, f: &ScalarFunction, x: f64, trunc: TruncationPolicy) -> Result<f64> {
    check_n_lambda(n, 0.0)?;
    let profile = dunkl_poisson_profile(n, mu, x, trunc)?;
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        if w > 0.0 {
            acc.add(w * f.eval(shifted_index(k, mu) / nf));
        }
    }
    Ok(acc.value())
}

/// Appell-Szász sampling operator `e^{-n x} / g(1) sum_k p_k(n x) f(k / n)`.
pub fn sampling_jakimovski(
    n: u64,
    g_coeffs: &[f64],
    f: &ScalarFunction,
    x: f64,
    trunc: TruncationPolicy,
) -> Result<f64> {
    check_n_lambda(n, 0.0)?;
    let g = classical_symbol(g_coeffs)?;
    let profile = classical_appell_profile(n, &g, x, trunc)?;
    let nf = n as f64;
    let mut acc = CompensatedSum::new();
    for (k, &w) in profile.weights.iter().enumerate() {
        if w > 0.0 {
            acc.add(w * f.eval(k as f64 / nf));
        }
    }
    Ok(acc.value())
}

/// Classical coefficients `g_r = a_r / r!` matching a family at `mu = 0`.
pub fn classical_coefficients(family: &AppellFamily) -> Result<Vec<f64>> {
    if family.mu() != 0.0 {
        return Err(invalid("mu", "classical coefficients only exist for mu = 0"));
    }
    Ok(family.symbol_coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn config(id: &str, mu: f64, n: u64, lambda: f64) -> OperatorConfig {
        OperatorConfig::new(n, lambda, AppellFamily::catalog(id, mu).unwrap()).unwrap()
    }

    fn ln_factorial(k: usize) -> f64 {
        (1..=k).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn config_validation() {
        let fam = AppellFamily::catalog("one", 0.5).unwrap();
        assert!(OperatorConfig::new(0, 0.0, fam.clone()).is_err());
        assert!(OperatorConfig::new(3, -0.1, fam.clone()).is_err());
        assert!(OperatorConfig::new(3, f64::NAN, fam.clone()).is_err());
        assert!(OperatorConfig::new(3, 0.0, AppellFamily::catalog("one", -0.25).unwrap()).is_err());
        let c = OperatorConfig::new(3, 0.0, fam).unwrap();
        assert!(c.clone().with_quad_order(0).is_err());
        assert!(c.with_n(0).is_err());
        assert!(TruncationPolicy::new(1.0, 10).is_err());
        assert!(TruncationPolicy::new(0.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-12, 0).is_err());
    }

    #[test]
    fn weights_at_origin() {
        let p = weights(&config("one", 0.0, 5, 0.0), 0.0).unwrap();
        assert_eq!(p.weights[0], 1.0);
        assert!(p.weights[1..].iter().all(|&w| w == 0.0));
        assert_eq!(p.tail_mass, 0.0);
        let c = config("bump", 0.5, 5, 0.0);
        let p = weights(&c, 0.0).unwrap();
        // A(1) = 1 + 1/gamma(2) = 5/4
        assert_relative_eq!(p.weights[0], 0.8, max_relative = 1e-15);
        assert!(weights(&config("one", 0.0, 5, 0.0), -1.0).is_err());
    }

    #[test]
    fn poisson_weights_for_constant_symbol() {
        for &(n, x) in &[(10u64, 1.0), (3, 0.2), (256, 5.0)] {
            let p = weights(&config("one", 0.0, n, 0.0), x).unwrap();
            let y = n as f64 * x;
            for (k, &w) in p.weights.iter().enumerate() {
                let log_want = k as f64 * y.ln() - ln_factorial(k) - y;
                let want = log_want.exp();
                // both sides lose about eps * |largest log term| to rounding
                let tol = 1e-12f64.max(8.0 * f64::EPSILON * (y + k as f64 * y.ln()));
                if want > 1e-280 {
                    assert_relative_eq!(w, want, max_relative = tol);
                }
            }
        }
    }

    #[test]
    fn weights_match_appell_polynomials() {
        for &mu in &[0.0, 0.5, 1.5] {
            for fam in crate::appell::catalog_families(mu).unwrap() {
                let c = OperatorConfig::new(4, 0.0, fam.clone()).unwrap();
                let y = 4.0 * 1.5;
                let log_e = fam.table().log_e_mu(y, 1e-18).unwrap();
                let p = weights(&c, 1.5).unwrap();
                for k in [0usize, 1, 2, 5, 9, 20] {
                    let want = (fam.log_p(k, y).unwrap() - fam.table().log_gamma(k).unwrap() - log_e).exp();
                    assert_relative_eq!(p.weights[k], want, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn weights_are_certified_probabilities() {
        for &mu in &[0.0, 0.5, 1.5] {
            for fam in crate::appell::catalog_families(mu).unwrap() {
                for &n in &[1u64, 16, 256] {
                    let c = OperatorConfig::new(n, 0.7, fam.clone()).unwrap();
                    for &x in &[0.0, 0.1, 2.0, 5.0] {
                        let p = weights(&c, x).unwrap();
                        assert!(p.weights.iter().all(|&w| w >= 0.0));
                        assert!((p.total() - 1.0).abs() <= p.tail_mass + 1e-15);
                        assert!(p.tail_mass <= c.trunc().eps);
                        assert_eq!(p.weights.len(), p.k_used + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_cap_is_an_error() {
        let c = config("one", 0.5, 100, 0.0).with_trunc(TruncationPolicy::new(1e-12, 20).unwrap());
        assert!(matches!(weights(&c, 1.0), Err(Error::Truncation { .. })));
        let huge = config("one", 0.5, 1_000_000, 0.0);
        assert!(matches!(weights(&huge, 5.0), Err(Error::Truncation { .. })));
        let opts = SeriesOptions::default();
        let one = ScalarFunction::constant(1.0);
        assert!(matches!(wafi_rao_apply(1_000_000, 0.0, 0.5, &one, 5.0, &opts), Err(Error::Truncation { .. })));
        assert!(matches!(ciupa_apply(1_000_000, 0.0, &[1.0], &one, 5.0, &opts), Err(Error::Truncation { .. })));
    }

    #[test]
    fn large_arguments_stay_finite() {
        let c = config("geometric", 1.5, 1024, 0.7);
        let p = weights(&c, 8.0).unwrap();
        assert!(p.weights.iter().all(|w| w.is_finite()));
        assert!((apply_monomial(&c, 0, 8.0).unwrap() - 1.0).abs() <= 1e-11);
    }

    #[test]
    fn specialized_moments() {
        let c = config("one", 0.0, 10, 0.0);
        assert_relative_eq!(apply_monomial(&c, 1, 1.0).unwrap(), 1.1, max_relative = 1e-12);
        assert_relative_eq!(apply_monomial(&c, 2, 1.0).unwrap(), 1.42, max_relative = 1e-12);
        assert_relative_eq!(apply(&c, &ScalarFunction::affine(1.0, 0.0), 1.0).unwrap(), 1.1, max_relative = 1e-12);
        assert_relative_eq!(apply(&c, &ScalarFunction::monomial(2), 1.0).unwrap(), 1.42, max_relative = 1e-12);
        assert_relative_eq!(apply_central(&c, 1, 1.0).unwrap(), 0.1, max_relative = 1e-11);
        assert_relative_eq!(apply_central(&c, 2, 1.0).unwrap(), 0.22, max_relative = 1e-11);
        assert!(apply_monomial(&c, 5, 1.0).is_err());
        assert!(apply_central(&c, 3, 1.0).is_err());
    }

    #[test]
    fn partition_of_unity() {
        let one = ScalarFunction::constant(1.0);
        for &mu in &[0.0, 0.5, 1.5] {
            for fam in crate::appell::catalog_families(mu).unwrap() {
                let c = OperatorConfig::new(16, 0.7, fam).unwrap();
                for &x in &[0.0, 0.5, 5.0] {
                    assert!((apply(&c, &one, x).unwrap() - 1.0).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn quadrature_matches_exact_moments() {
        for &mu in &[0.0, 1.5] {
            let c = config("trunc-exp", mu, 16, 0.7);
            for j in 0..=3u32 {
                let f =
                    ScalarFunction::new("t^j", crate::function::GrowthClass::SubQuadratic, move |t| t.powi(j as i32));
                for &x in &[0.1, 2.0] {
                    let a = apply(&c, &f, x).unwrap();
                    let b = apply_monomial(&c, j, x).unwrap();
                    assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "j={j} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn reductions_agree() {
        let opts = SeriesOptions::default();
        let fs = [ScalarFunction::exp_decay(), ScalarFunction::sine(), ScalarFunction::monomial(2)];
        for id in crate::appell::CATALOG_IDS {
            let fam = AppellFamily::catalog(id, 0.0).unwrap();
            let g = classical_coefficients(&fam).unwrap();
            for &n in &[1u64, 16] {
                let c = OperatorConfig::new(n, 0.7, fam.clone()).unwrap();
                for f in &fs {
                    for &x in &[0.1, 2.0] {
                        let a = apply(&c, f, x).unwrap();
                        let b = ciupa_apply(n, 0.7, &g, f, x, &opts).unwrap();
                        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{id} n={n} x={x}");
                    }
                }
            }
        }
        for &mu in &[0.0, 0.5, 1.5] {
            let c = config("one", mu, 4, 0.7);
            for f in &fs {
                for &x in &[0.1, 2.0] {
                    let a = apply(&c, f, x).unwrap();
                    let b = wafi_rao_apply(4, 0.7, mu, f, x, &opts).unwrap();
                    assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "mu={mu} x={x}");
                }
            }
        }
        assert!(classical_coefficients(&AppellFamily::catalog("one", 0.5).unwrap()).is_err());
    }

    #[test]
    fn reduced_operator_examples() {
        let opts = SeriesOptions::default();
        let t = ScalarFunction::affine(1.0, 0.0);
        let one = ScalarFunction::constant(1.0);
        assert_relative_eq!(wafi_rao_apply(10, 0.0, 0.0, &t, 1.0, &opts).unwrap(), 1.1, max_relative = 1e-12);
        assert_relative_eq!(ciupa_apply(10, 0.0, &[1.0], &t, 1.0, &opts).unwrap(), 1.1, max_relative = 1e-12);
        assert!((wafi_rao_apply(7, 0.3, 1.5, &one, 2.0, &opts).unwrap() - 1.0).abs() <= 1e-12);
        assert!((ciupa_apply(7, 0.3, &[1.0], &one, 2.0, &opts).unwrap() - 1.0).abs() <= 1e-12);
        assert!(ciupa_apply(7, 0.3, &[0.0, 1.0], &one, 2.0, &opts).is_err());
        assert!(ciupa_apply(7, 0.3, &[1.0, -2.0], &one, 2.0, &opts).is_err());
    }

    #[test]
    fn sampling_operators() {
        let trunc = TruncationPolicy::default();
        let t = ScalarFunction::affine(1.0, 0.0);
        let one = ScalarFunction::constant(1.0);
        let e = ScalarFunction::exp_decay();
        for &x in &[0.0, 0.3, 2.0] {
            assert!((sampling_szasz_dunkl(9, 1.5, &one, x, trunc).unwrap() - 1.0).abs() <= 1e-12);
            assert!((sampling_jakimovski(9, &[1.0, 0.5], &one, x, trunc).unwrap() - 1.0).abs() <= 1e-12);
            assert!((sampling_szasz_dunkl(9, 0.0, &t, x, trunc).unwrap() - x).abs() <= 1e-12);
            assert!((sampling_jakimovski(9, &[1.0], &t, x, trunc).unwrap() - x).abs() <= 1e-12);
            // classical Szasz: e^{-nx} sum (nx)^k/k! e^{-k/n} = exp(nx (e^{-1/n} - 1))
            let want = (9.0 * x * ((-1.0f64 / 9.0).exp() - 1.0)).exp();
            assert_relative_eq!(sampling_szasz_dunkl(9, 0.0, &e, x, trunc).unwrap(), want, max_relative = 1e-12);
            assert_relative_eq!(sampling_jakimovski(9, &[2.0], &e, x, trunc).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn thread_safe_shared_config() {
        let c = config("geometric", 0.5, 64, 0.7);
        let serial: Vec<f64> = (0..8).map(|i| apply(&c, &ScalarFunction::sine(), i as f64).unwrap()).collect();
        let parallel: Vec<f64> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|i| {
                    let c = c.clone();
                    s.spawn(move || apply(&c, &ScalarFunction::sine(), i as f64).unwrap())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert_eq!(serial, parallel);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn positivity(mu in 0.0f64..2.0, lam in 0.0f64..2.0, n in 1u64..200, x in 0.0f64..8.0, c in 0.0f64..4.0) {
            let cfg = OperatorConfig::new(n, lam, AppellFamily::catalog("bump", mu).unwrap()).unwrap();
            let f = ScalarFunction::new("sq", crate::function::GrowthClass::SubQuadratic, move |t| (t - c).powi(2));
            prop_assert!(apply(&cfg, &f, x).unwrap() >= -cfg.trunc().eps);
            prop_assert!(apply(&cfg, &ScalarFunction::runge(), x).unwrap() >= -cfg.trunc().eps);
        }

        #[test]
        fn linearity(a in -5.0f64..5.0, b in -5.0f64..5.0, n in 1u64..100, x in 0.0f64..5.0, mu in 0.0f64..2.0) {
            let cfg = OperatorConfig::new(n, 0.7, AppellFamily::catalog("geometric", mu).unwrap()).unwrap();
            let f = ScalarFunction::exp_decay();
            let g = ScalarFunction::sine();
            let (f2, g2) = (f.clone(), g.clone());
            let h = ScalarFunction::new("af+bg", crate::function::GrowthClass::Bounded, move |t| a * f2.eval(t) + b * g2.eval(t));
            let lhs = apply(&cfg, &h, x).unwrap();
            let rhs = a * apply(&cfg, &f, x).unwrap() + b * apply(&cfg, &g, x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + a.abs() + b.abs()));
        }

        #[test]
        fn monotonicity(n in 1u64..100, x in 0.0f64..5.0, mu in 0.0f64..2.0, shift in 0.0f64..1.0) {
            let cfg = OperatorConfig::new(n, 0.0, AppellFamily::catalog("trunc-exp", mu).unwrap()).unwrap();
            let f = ScalarFunction::exp_decay();
            let g = ScalarFunction::new("e+s", crate::function::GrowthClass::Bounded, move |t| (-t).exp() + shift * t / (1.0 + t));
            let eps = cfg.trunc().eps;
            prop_assert!(apply(&cfg, &f, x).unwrap() <= apply(&cfg, &g, x).unwrap() + 2.0 * eps);
        }
    }
}
