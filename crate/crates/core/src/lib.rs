//! Dunkl-Gamma type operators built on Dunkl-Appell polynomials.
//!
//! The operator acting on `f` at `x >= 0` is
//!
//! ```text
//! D_n^*(f; x) = sum_k  p_k(n x) / (gamma_mu(k) e_mu(n x) A(1))
//!                      * n^{m_k + 1} / Gamma(m_k + 1) * int_0^inf t^{m_k} e^{-n t} f(t) dt,
//! m_k = k + 2 mu theta(k) + lambda,
//! ```
//!
//! where `p_k` are the Dunkl-Appell polynomials of a symbol `A(t)` and `e_mu` is the
//! Dunkl exponential. Modules, bottom up:
//!
//! - [`dunkl`]: `gamma_mu(k)`, `e_mu`, the ratio `e_mu(-y) / e_mu(y)`, the Dunkl derivative.
//! - [`appell`]: normalized families, `p_k`, and the symbol values the moments need.
//! - [`quadrature`]: Gauss rules for Gamma densities with real shape.
//! - [`operators`]: certified weights, `D_n^*` and its reductions.
//! - [`analysis`]: closed-form moments, moduli of continuity, rate bounds.
//! - [`cli`]: the `dga` batch harness.
//!
//! ```
//! use dunkl_appell::{apply, AppellFamily, OperatorConfig, ScalarFunction};
//!
//! let family = AppellFamily::catalog("one", 0.0)?;
//! let config = OperatorConfig::new(10, 0.0, family)?;
//! let v = apply(&config, &ScalarFunction::monomial(2), 1.0)?;
//! assert!((v - 1.42).abs() < 1e-12);
//! # Ok::<(), dunkl_appell::Error>(())
//! ```

// `!(a > b)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod appell;
pub mod cli;
pub mod dunkl;
pub mod error;
pub mod function;
pub mod numeric;
pub mod operators;
pub mod quadrature;

pub use analysis::{closed_moments, empirical_moments, verify_bounds, BoundReport, MomentReport};
pub use appell::{AppellFamily, AppellScalars};
pub use dunkl::{e_mu, e_ratio, DunklIndex, GammaTable};
pub use error::{Error, Result};
pub use function::{GrowthClass, Lipschitz, ScalarFunction};
pub use operators::{apply, apply_monomial, weights, OperatorConfig, TruncationPolicy, WeightProfile};
pub use quadrature::{build_rule, gamma_expectation, GammaRule, RuleCache};
