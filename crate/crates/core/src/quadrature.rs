//! Gamma-density expectations by generalized Gauss-Laguerre quadrature.
//!
//! The inner integral of every Durrmeyer-type operator here is
//!
//! ```text
//! n^{m+1} / Gamma(m+1) * int_0^inf e^{-n t} t^m f(t) dt = E[f(U / n)],  U ~ Gamma(m + 1, 1)
//! ```
//!
//! so a rule only has to integrate against `u^alpha e^{-u}` normalized to unit
//! mass. Nodes are the eigenvalues of the Jacobi matrix (Golub-Welsch), polished
//! by Newton steps on the orthonormal recurrence. Weights come from the
//! Christoffel formula `1 / sum_k q_k(x_i)^2`, which keeps full relative accuracy
//! even for the tiny weights at the largest nodes. `Gamma(alpha + 1)` is never
//! formed, so large `alpha` does not overflow.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{invalid, Error, Result};

/// Default rule order for smooth integrands.
pub const DEFAULT_ORDER: usize = 48;
/// Verification order, also used for non-smooth integrands.
pub const CHECK_ORDER: usize = 96;

/// A Gauss rule for the normalized weight `u^alpha e^{-u} / Gamma(alpha + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GammaRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights normalized to total mass one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i g(u_i)`, the expectation of `g(U)` for `U ~ Gamma(alpha + 1, 1)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * g(u)).sum()
    }
}

pub fn build_rule(alpha: f64, order: usize) -> Result<GammaRule> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(invalid("alpha", format!("must be finite and >= 0, got {alpha}")));
    }
    if order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    let recurrence = Recurrence::laguerre(alpha, order);
    let mut diag = recurrence.diag.clone();
    let mut off = vec![0.0; order];
    off[..order - 1].copy_from_slice(&recurrence.off[1..order]);
    tridiagonal_eigenvalues(&mut diag, &mut off).map_err(|_| Error::EigenSolver { alpha, order })?;
    diag.sort_by(f64::total_cmp);

    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for &guess in &diag {
        let x = recurrence.polish(guess);
        nodes.push(x);
        weights.push(recurrence.christoffel(x));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    if nodes.windows(2).any(|p| p[1] <= p[0]) || nodes[0] <= 0.0 {
        return Err(Error::EigenSolver { alpha, order });
    }
    Ok(GammaRule { alpha, nodes, weights })
}

/// Expectation of `f` under the Gamma density with shape `m + 1` and rate `n`.
pub fn gamma_expectation<F: Fn(f64) -> f64>(f: F, m: f64, n: f64, rule: &GammaRule) -> f64 {
    assert!(
        (rule.alpha - m).abs() <= 1e-12 * (1.0 + m.abs()),
        "rule built for alpha = {} used with m = {m}",
        rule.alpha
    );
    rule.integrate(|u| f(u / n))
}

/// `E[T^j]` for `T ~ Gamma(m + 1, n)`: `prod_{i=1..j} (m + i) / n^j`.
pub fn gamma_moment_exact(j: u32, m: f64, n: f64) -> f64 {
    (1..=j).map(|i| (m + f64::from(i)) / n).product()
}

/// Three-term recurrence of the orthonormal Laguerre polynomials for `u^alpha e^{-u}`:
/// `b_{k+1} q_{k+1} = (x - a_k) q_k - b_k q_{k-1}`.
struct Recurrence {
    diag: Vec<f64>,
    /// `off[k] = b_k`, with `off[0] = 0` and one extra entry `b_order`.
    off: Vec<f64>,
}

impl Recurrence {
    fn laguerre(alpha: f64, order: usize) -> Self {
        let diag = (0..order).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
        let off = (0..=order).map(|i| (i as f64 * (i as f64 + alpha)).sqrt()).collect();
        Self { diag, off }
    }

    fn order(&self) -> usize {
        self.diag.len()
    }

    /// `q_order(x) / q_order'(x)`.
    fn newton_step(&self, x: f64) -> f64 {
        let (mut q_prev, mut q) = (0.0, 1.0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        for k in 0..self.order() {
            let q_next = ((x - self.diag[k]) * q - self.off[k] * q_prev) / self.off[k + 1];
            let d_next = (q + (x - self.diag[k]) * d - self.off[k] * d_prev) / self.off[k + 1];
            q_prev = q;
            q = q_next;
            d_prev = d;
            d = d_next;
            let scale = q.abs().max(d.abs());
            if scale > 1e150 {
                q_prev /= scale;
                q /= scale;
                d_prev /= scale;
                d /= scale;
            }
        }
        q / d
    }

    fn polish(&self, mut x: f64) -> f64 {
        for _ in 0..8 {
            let step = self.newton_step(x);
            if !step.is_finite() {
                break;
            }
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        x
    }

    /// `1 / sum_{k < order} q_k(x)^2`.
    fn christoffel(&self, x: f64) -> f64 {
        let (mut q_prev, mut q) = (0.0, 1.0);
        let mut sum = 1.0;
        let mut log_scale = 0.0;
        for k in 0..self.order() - 1 {
            let q_next = ((x - self.diag[k]) * q - self.off[k] * q_prev) / self.off[k + 1];
            q_prev = q;
            q = q_next;
            sum += q * q;
            if q.abs() > 1e120 {
                q_prev *= 1e-120;
                q *= 1e-120;
                sum *= 1e-240;
                log_scale += 240.0 * std::f64::consts::LN_10;
            }
        }
        (-(sum.ln() + log_scale)).exp()
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `off[i]` couples `diag[i]` and `diag[i + 1]`; `off[n - 1]` is ignored.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> std::result::Result<(), ()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(());
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Thread-safe cache of rules keyed by `(alpha, order)`.
///
/// Lookups that race on a missing key may both build the rule; construction is
/// deterministic so either result is kept.
#[derive(Debug)]
pub struct RuleCache {
    rules: RwLock<HashMap<(u64, usize), Arc<GammaRule>>>,
    capacity: usize,
}

impl Default for RuleCache {
    fn default() -> Self {
        Self::with_capacity(1 << 17)
    }
}

impl RuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A cache that is flushed once it holds `capacity` rules.
    pub fn with_capacity(capacity: usize) -> Self {
        Self { rules: RwLock::new(HashMap::new()), capacity: capacity.max(1) }
    }

    pub fn get(&self, alpha: f64, order: usize) -> Result<Arc<GammaRule>> {
        let key = (alpha.to_bits(), order);
        if let Some(rule) = self.rules.read().expect("rule cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(build_rule(alpha, order)?);
        let mut map = self.rules.write().expect("rule cache poisoned");
        if map.len() >= self.capacity {
            map.clear();
        }
        Ok(Arc::clone(map.entry(key).or_insert(rule)))
    }

    pub fn len(&self) -> usize {
        self.rules.read().expect("rule cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
