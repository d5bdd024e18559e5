//! Dunkl-Appell polynomial families.
//!
//! A family is fixed by an analytic symbol `A(t) = sum_r a_r t^r / gamma_mu(r)`.
//! The polynomials come out of `A(t) e_mu(x t) = sum_k p_k(x) t^k / gamma_mu(k)`,
//! which gives `p_k(x) = sum_j binom_mu(k, j) a_{k-j} x^j`.
//!
//! Coefficients are stored normalized so that `A(1) = 1`. The operators only see
//! ratios against `A(1)`, so this loses nothing, and the positivity requirement
//! becomes a sign check on the stored coefficients.

use std::sync::Arc;

use crate::dunkl::{dunkl_binomial, e_mu, GammaTable};
use crate::error::{Error, Result};
use crate::numeric::{k_log, LogSumExp};

/// Cap of the table a family builds for itself when none is supplied.
const DEFAULT_TABLE_CAP: usize = 256;

/// Identifiers of the built-in families.
pub const CATALOG_IDS: [&str; 4] = ["one", "trunc-exp", "geometric", "bump"];

/// A normalized Dunkl-Appell family.
#[derive(Debug, Clone)]
pub struct AppellFamily {
    label: String,
    coeffs: Vec<f64>,
    table: Arc<GammaTable>,
}

/// Values of the normalized symbol and its derivatives at `t = 1` and `t = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellScalars {
    pub a1: f64,
    pub am1: f64,
    pub ap1: f64,
    pub apm1: f64,
    pub app1: f64,
}

impl AppellFamily {
    /// Normalize `raw` against `A(1)` and check positivity.
    pub fn new(raw: &[f64], mu: f64) -> Result<Self> {
        let cap = raw.len().saturating_sub(1).max(DEFAULT_TABLE_CAP);
        Self::with_table(raw, Arc::new(GammaTable::new(mu, cap)?))
    }

    pub fn with_table(raw: &[f64], table: Arc<GammaTable>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidFamily("empty coefficient list".into()));
        }
        if raw.len() > table.cap() + 1 {
            return Err(Error::IndexOutOfRange { index: raw.len() - 1, cap: table.cap() });
        }
        if let Some(bad) = raw.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidFamily(format!("non-finite coefficient {bad}")));
        }
        if raw[0] == 0.0 {
            return Err(Error::InvalidFamily("a_0 must be nonzero".into()));
        }
        let a_at_one: f64 = raw.iter().enumerate().map(|(r, a)| a * (-table.log_at(r)).exp()).sum();
        if a_at_one == 0.0 || !a_at_one.is_finite() {
            return Err(Error::InvalidFamily(format!("A(1) = {a_at_one} is not a usable normalizer")));
        }
        let coeffs: Vec<f64> = raw.iter().map(|a| a / a_at_one).collect();
        if let Some((r, c)) = coeffs.iter().enumerate().find(|(_, c)| **c < 0.0) {
            return Err(Error::InvalidFamily(format!(
                "a_{r} / A(1) = {c} is negative; the operator would not be positive"
            )));
        }
        Ok(Self { label: "custom".into(), coeffs, table })
    }

    /// A family from the built-in catalog.
    pub fn catalog(id: &str, mu: f64) -> Result<Self> {
        let raw = catalog_coefficients(id).ok_or_else(|| Error::InvalidFamily(format!("unknown family id `{id}`")))?;
        let mut family = Self::new(&raw, mu)?;
        family.label = id.to_string();
        Ok(family)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mu(&self) -> f64 {
        self.table.mu()
    }

    /// Normalized coefficients `a_r / A(1)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn table(&self) -> &Arc<GammaTable> {
        &self.table
    }

    /// Largest `r` with a nonzero coefficient; the polynomial degree of `A`.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// `a_r / (A(1) gamma_mu(r))`, the power-series coefficients of the
    /// normalized symbol. They are nonnegative and sum to one.
    pub fn symbol_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().enumerate().map(|(r, a)| a * (-self.table.log_at(r)).exp()).collect()
    }

    /// Normalized symbol `A(t) / A(1)`.
    pub fn symbol(&self, t: f64) -> f64 {
        self.symbol_coeffs().iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn scalars(&self) -> AppellScalars {
        let b = self.symbol_coeffs();
        let mut s = AppellScalars { a1: 0.0, am1: 0.0, ap1: 0.0, apm1: 0.0, app1: 0.0 };
        for (r, &c) in b.iter().enumerate() {
            let rf = r as f64;
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            s.a1 += c;
            s.am1 += sign * c;
            s.ap1 += rf * c;
            s.apm1 -= sign * rf * c;
            s.app1 += rf * (rf - 1.0) * c;
        }
        s
    }

    /// `ln p_k(x)` for `x >= 0`; `-inf` when `p_k(x) = 0`.
    pub fn log_p(&self, k: usize, x: f64) -> Result<f64> {
        log_p_in(self, &self.table, k, x)
    }

    /// `p_k(x)` itself; overflows for large `k` or `x`.
    pub fn p(&self, k: usize, x: f64) -> Result<f64> {
        self.log_p(k, x).map(f64::exp)
    }

    /// Residual `|A(t) e_mu(x t) - sum_{k <= big_k} p_k(x) t^k / gamma_mu(k)|`.
    pub fn gen_check(&self, x: f64, t: f64, big_k: usize) -> Result<f64> {
        let table;
        let table_ref = if big_k <= self.table.cap() {
            &*self.table
        } else {
            table = GammaTable::new(self.mu(), big_k)?;
            &table
        };
        let lhs = self.symbol(t) * e_mu(self.mu(), x * t, 1e-18)?;
        let log_t = t.abs().ln();
        let mut rhs = 0.0;
        for k in 0..=big_k {
            let lp = log_p_in(self, table_ref, k, x)?;
            if lp == f64::NEG_INFINITY {
                continue;
            }
            let sign = if t < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            rhs += sign * (lp - table_ref.log_at(k) + k_log(k, log_t)).exp();
        }
        Ok((lhs - rhs).abs())
    }
}

/// `ln p_k(x)` using an external (larger) table of the same `mu`.
///
/// Log-sum-exp over the Dunkl-binomial expansion; every addend is nonnegative
/// for a valid family.
pub fn log_p_in(family: &AppellFamily, table: &GammaTable, k: usize, x: f64) -> Result<f64> {
    if k > table.cap() {
        return Err(Error::IndexOutOfRange { index: k, cap: table.cap() });
    }
    debug_assert_eq!(table.mu(), family.mu());
    if x == 0.0 {
        return Ok(family.coeffs.get(k).map_or(f64::NEG_INFINITY, |c| c.ln()));
    }
    let log_x = x.ln();
    let mut acc = LogSumExp::new();
    for (r, &a) in family.coeffs.iter().enumerate().take(k + 1) {
        if a == 0.0 {
            continue;
        }
        let j = k - r;
        let log_binom = dunkl_binomial(table, k, j)?.ln();
        acc.add(log_binom + a.ln() + k_log(j, log_x));
    }
    Ok(acc.value())
}

/// Raw coefficients of the built-in families.
pub fn catalog_coefficients(id: &str) -> Option<Vec<f64>> {
    match id {
        "one" => Some(vec![1.0]),
        "trunc-exp" => Some(vec![1.0; 13]),
        "geometric" => Some((0..=20).map(|r| 0.5f64.powi(r)).collect()),
        "bump" => Some(vec![1.0, 0.0, 1.0]),
        _ => None,
    }
}

/// The four catalog families for one `mu`.
pub fn catalog_families(mu: f64) -> Result<Vec<AppellFamily>> {
    CATALOG_IDS.iter().map(|id| AppellFamily::catalog(id, mu)).collect()
}
