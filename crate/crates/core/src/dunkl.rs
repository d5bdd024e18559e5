//! Dunkl special functions: the parity indicator, the coefficients `gamma_mu(k)`,
//! the Dunkl exponential `e_mu`, the Dunkl derivative `T_mu` and Dunkl-binomial
//! coefficients.
//!
//! `gamma_mu` is defined by `gamma_mu(0) = 1` and
//! `gamma_mu(k + 1) = (k + 1 + 2 mu theta(k + 1)) gamma_mu(k)`. It overflows an
//! `f64` near `k = 170`, so tables keep `ln gamma_mu(k)` and every series term is
//! assembled in the log domain.

use crate::error::{invalid, Error, Result};
use crate::numeric::{k_log, CompensatedSum, LogSumExp};

/// Number of consecutive sub-tolerance terms required before a series is cut.
pub const STOP_RUN: usize = 5;

/// Hard cap on the number of terms of any directly summed series.
pub const SERIES_TERM_CAP: usize = 1_000_000;

/// The Dunkl parameter `mu`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DunklIndex(f64);

impl DunklIndex {
    /// Accepts `mu > -1/2`, the range where all coefficients are positive.
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > -0.5 {
            Ok(Self(mu))
        } else {
            Err(invalid("mu", format!("must satisfy mu > -1/2, got {mu}")))
        }
    }

    /// Accepts `mu >= 0`, the range where the operators are defined.
    pub fn for_operator(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu >= 0.0 {
            Ok(Self(mu))
        } else {
            Err(invalid("mu", format!("operators require mu >= 0, got {mu}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Parity indicator: 0 for even `k`, 1 for odd `k`.
#[inline]
pub fn theta(k: usize) -> u8 {
    (k & 1) as u8
}

/// Recursion factor `k + 2 mu theta(k)`, i.e. `gamma_mu(k) / gamma_mu(k - 1)`.
#[inline]
pub fn shifted_index(k: usize, mu: f64) -> f64 {
    k as f64 + 2.0 * mu * f64::from(theta(k))
}

/// `ln gamma_mu(k)` for `k = 0..=cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable {
    mu: f64,
    log_values: Vec<f64>,
}

impl GammaTable {
    pub fn new(mu: f64, cap: usize) -> Result<Self> {
        let mu = DunklIndex::new(mu)?.get();
        let mut log_values = Vec::with_capacity(cap + 1);
        log_values.push(0.0);
        let mut acc = CompensatedSum::new();
        for k in 1..=cap {
            acc.add(shifted_index(k, mu).ln());
            log_values.push(acc.value());
        }
        Ok(Self { mu, log_values })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn cap(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn log_gamma(&self, k: usize) -> Result<f64> {
        self.log_values.get(k).copied().ok_or(Error::IndexOutOfRange { index: k, cap: self.cap() })
    }

    /// `gamma_mu(k)`; overflows to `inf` past `k ~ 170`.
    pub fn gamma(&self, k: usize) -> Result<f64> {
        self.log_gamma(k).map(f64::exp)
    }

    #[inline]
    pub(crate) fn log_at(&self, k: usize) -> f64 {
        self.log_values[k]
    }

    /// `ln e_mu(y)` for `y >= 0`, summed in the log domain from this table.
    ///
    /// Terms are cut once `STOP_RUN` consecutive terms fall below `tol` times the
    /// running sum after the peak of the series. Fails if the table is too short.
    pub fn log_e_mu(&self, y: f64, tol: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(invalid("y", format!("log_e_mu needs y >= 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let log_y = y.ln();
        let log_tol = tol.ln();
        let mut acc = LogSumExp::new();
        let mut quiet = 0;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=self.cap() {
            let lt = k_log(k, log_y) - self.log_at(k);
            acc.add(lt);
            if lt < prev && lt < acc.value() + log_tol {
                quiet += 1;
                if quiet >= STOP_RUN {
                    return Ok(acc.value());
                }
            } else {
                quiet = 0;
            }
            prev = lt;
        }
        Err(Error::IndexOutOfRange { index: self.cap() + 1, cap: self.cap() })
    }
}

/// Table cap large enough to sum `e_mu(y)` to double precision.
pub fn cap_for_argument(y: f64) -> usize {
    (y + 16.0 * (y + 1.0).sqrt() + 64.0).ceil() as usize
}

/// Dunkl-binomial coefficient `gamma_mu(k) / (gamma_mu(j) gamma_mu(k - j))`.
pub fn dunkl_binomial(table: &GammaTable, k: usize, j: usize) -> Result<f64> {
    if j > k {
        return Err(invalid("j", format!("need j <= k, got j = {j}, k = {k}")));
    }
    let lk = table.log_gamma(k)?;
    Ok((lk - table.log_at(j) - table.log_at(k - j)).exp())
}

/// Dunkl exponential `e_mu(x) = sum_k x^k / gamma_mu(k)` by direct compensated summation.
///
/// Accurate for `x >= 0` up to the overflow threshold. For `x < 0` the series
/// alternates in blocks and loses about `2|x| / ln 10` digits; use [`e_ratio`]
/// for large negative arguments.
pub fn e_mu(mu: f64, x: f64, tol: f64) -> Result<f64> {
    let mu = DunklIndex::new(mu)?.get();
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut sum = CompensatedSum::new();
    let mut term = 1.0;
    sum.add(term);
    let mut quiet = 0;
    for k in 1..SERIES_TERM_CAP {
        term *= x / shifted_index(k, mu);
        sum.add(term);
        if term.abs() < tol * sum.value().abs() && (k as f64) > x.abs() {
            quiet += 1;
            if quiet >= STOP_RUN {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { what: "e_mu", terms: SERIES_TERM_CAP })
}

/// `e_mu(-y) / e_mu(y)` for `y >= 0`.
///
/// With `nu = mu - 1/2` the even and odd parts of `e_mu(y)` are a common factor
/// times `I_nu(y)` and `I_{nu+1}(y)`, so the ratio equals `(1 - r) / (1 + r)` with
/// `r = I_{nu+1}(y) / I_nu(y)`, evaluated by its continued fraction. This avoids
/// the cancellation of the alternating series. The ratio decays like
/// `mu / (2y)` for `mu > 0` and like `e^{-2y}` only at `mu = 0`.
pub fn e_ratio(mu: f64, y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y == 0.0 {
        return 1.0;
    }
    if mu == 0.0 {
        return (-2.0 * y).exp();
    }
    let r = bessel_i_ratio(mu - 0.5, y);
    (1.0 - r) / (1.0 + r)
}

/// `I_{nu+1}(y) / I_nu(y)` for `nu > -1`, `y > 0`, by modified Lentz on
/// `1 / (b_1 + 1 / (b_2 + ...))` with `b_j = 2 (nu + j) / y`.
fn bessel_i_ratio(nu: f64, y: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let b = |j: usize| 2.0 * (nu + j as f64) / y;
    let mut f = b(1).max(TINY);
    let mut c = f;
    let mut d = 0.0;
    for j in 2..SERIES_TERM_CAP {
        let bj = b(j);
        d += bj;
        if d.abs() < TINY {
            d = TINY;
        }
        c = bj + 1.0 / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// Dunkl derivative `T_mu f(x) = f'(x) + mu (f(x) - f(-x)) / x`, with `f'` by a
/// central difference of step `h`. At `x = 0` the limit `(1 + 2 mu) f'(0)` is used.
pub fn dunkl_derivative<F: Fn(f64) -> f64>(f: F, x: f64, mu: f64, h: f64) -> f64 {
    let deriv = (f(x + h) - f(x - h)) / (2.0 * h);
    if x == 0.0 {
        (1.0 + 2.0 * mu) * deriv
    } else {
        deriv + mu * (f(x) - f(-x)) / x
    }
}
