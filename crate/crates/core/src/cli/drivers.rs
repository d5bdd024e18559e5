//! Experiment drivers. Grid points are evaluated in parallel and emitted in grid order.

use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{closed_moments, empirical_moments, modulus, verify_bounds, GRID_STEP, X_MAX};
use crate::error::Result;
use crate::function::{Lipschitz, ScalarFunction};
use crate::operators::{apply, OperatorConfig, TruncationPolicy};
use crate::quadrature::RuleCache;

use super::catalog::{parse_family, parse_function};
use super::config::{RunConfig, Subcommand};
use super::output::{Cell, Table};

/// A driver's table plus any bound violations, one message per failed inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub violations: Vec<String>,
}

fn function_of(cfg: &RunConfig) -> Result<ScalarFunction> {
    parse_function(&cfg.function_id).map_err(|e| crate::error::invalid("function_id", e))
}

/// One operator configuration per `n`, sharing a rule cache.
fn configs(cfg: &RunConfig) -> Result<Vec<OperatorConfig>> {
    let family = parse_family(&cfg.family_id, cfg.mu)?;
    let trunc = TruncationPolicy::new(cfg.trunc_eps, TruncationPolicy::default().k_cap)?;
    let base = OperatorConfig::new(cfg.n_list[0], cfg.lambda, family)?
        .with_trunc(trunc)
        .with_quad_order(cfg.quad_order)?
        .with_rule_cache(Arc::new(RuleCache::new()));
    cfg.n_list.iter().map(|&n| base.with_n(n)).collect()
}

fn grid<'a>(configs: &'a [OperatorConfig], xs: &'a [f64]) -> Vec<(&'a OperatorConfig, f64)> {
    configs.iter().flat_map(|c| xs.iter().map(move |&x| (c, x))).collect()
}

fn coords(cfg: &RunConfig, n: u64, x: f64) -> Vec<Cell> {
    vec![cfg.mu.into(), cfg.lambda.into(), cfg.family_id.to_string().into(), n.into(), x.into()]
}

/// Rows `(x, n, D_n^*(f; x), f(x), err)`.
pub fn run_eval(cfg: &RunConfig) -> Result<Table> {
    let f = function_of(cfg)?;
    let configs = configs(cfg)?;
    let points = grid(&configs, &cfg.x_grid);
    let values: Vec<f64> = points.par_iter().map(|&(c, x)| apply(c, &f, x)).collect::<Result<_>>()?;
    let mut t = Table::new(vec!["mu", "lambda", "family", "function", "n", "x", "value", "f_x", "err"]);
    for (&(c, x), v) in points.iter().zip(values) {
        let fx = f.eval(x);
        let mut row = coords(cfg, c.n(), x);
        row.insert(3, cfg.function_id.as_str().into());
        row.extend([v.into(), fx.into(), (v - fx).abs().into()]);
        t.push(row);
    }
    Ok(t)
}

/// Closed-form against directly summed moments.
pub fn run_moments(cfg: &RunConfig) -> Result<Table> {
    let configs = configs(cfg)?;
    let points = grid(&configs, &cfg.x_grid);
    let reports: Vec<_> =
        points.par_iter().map(|&(c, x)| Ok((closed_moments(c, x), empirical_moments(c, x)?))).collect::<Result<_>>()?;
    let mut t = Table::new(vec![
        "mu",
        "lambda",
        "family",
        "n",
        "x",
        "m0",
        "m1_closed",
        "m1_empirical",
        "m2_closed",
        "m2_empirical",
        "omega1",
        "omega2",
        "lambda_n",
        "max_rel_discrepancy",
    ]);
    for (&(c, x), (closed, emp)) in points.iter().zip(reports) {
        let mut row = coords(cfg, c.n(), x);
        row.extend([
            emp.m0.into(),
            closed.m1.into(),
            emp.m1.into(),
            closed.m2.into(),
            emp.m2.into(),
            closed.omega1.into(),
            closed.omega2c.into(),
            closed.lambda_n.into(),
            closed.max_rel_discrepancy(&emp).into(),
        ]);
        t.push(row);
    }
    Ok(t)
}

/// Sup error over the grid for each `n`, with the empirical rate between consecutive `n`.
pub fn run_convergence(cfg: &RunConfig) -> Result<Table> {
    let f = function_of(cfg)?;
    let configs = configs(cfg)?;
    let points = grid(&configs, &cfg.x_grid);
    let per_point: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(c, x)| {
            let err = (apply(c, &f, x)? - f.eval(x)).abs();
            let delta = closed_moments(c, x).omega2c.sqrt();
            let w = if delta > 0.0 { modulus(&f, delta, X_MAX, GRID_STEP.min(delta / 50.0))? } else { 0.0 };
            Ok((err, 2.0 * w))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(vec![
        "mu",
        "lambda",
        "family",
        "function",
        "n",
        "x_min",
        "x_max",
        "x_count",
        "sup_error",
        "bound_t31_sup",
        "rate",
    ]);
    let xs = &cfg.x_grid;
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut prev: Option<(u64, f64)> = None;
    for (i, c) in configs.iter().enumerate() {
        let chunk = &per_point[i * xs.len()..(i + 1) * xs.len()];
        let sup_err = chunk.iter().map(|p| p.0).fold(0.0, f64::max);
        let sup_bound = chunk.iter().map(|p| p.1).fold(0.0, f64::max);
        let rate = prev.map(|(n0, e0)| (sup_err / e0).ln() / (c.n() as f64 / n0 as f64).ln());
        t.push(vec![
            cfg.mu.into(),
            cfg.lambda.into(),
            cfg.family_id.to_string().into(),
            cfg.function_id.as_str().into(),
            c.n().into(),
            x_min.into(),
            x_max.into(),
            (xs.len() as u64).into(),
            sup_err.into(),
            sup_bound.into(),
            rate.into(),
        ]);
        prev = Some((c.n(), sup_err));
    }
    Ok(t)
}

/// All bound reports plus a summary; violations carry full coordinates.
pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    let f = function_of(cfg)?;
    let lip = match (cfg.alpha, cfg.m_lip) {
        (Some(exponent), Some(constant)) => Some(Lipschitz { constant, exponent }),
        _ => f.lipschitz(),
    };
    if f.known_modulus(1.0).is_none() && lip.is_none() {
        return Err(crate::error::invalid(
            "function_id",
            format!("`{}` has neither an analytic modulus nor Lipschitz data to verify", cfg.function_id),
        ));
    }
    let configs = configs(cfg)?;
    let points = grid(&configs, &cfg.x_grid);
    let reports: Vec<_> = points.par_iter().map(|&(c, x)| verify_bounds(c, &f, x, lip)).collect::<Result<_>>()?;

    let mut t = Table::new(vec![
        "mu",
        "lambda",
        "family",
        "function",
        "n",
        "x",
        "err",
        "bound_t31",
        "t31_checked",
        "bound_lip",
        "bound_peetre_rhs",
        "ratio_peetre",
        "quad_discrepancy",
        "violations",
    ]);
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    for (&(c, x), r) in points.iter().zip(&reports) {
        for v in &r.violations {
            violations.push(format!(
                "{:?} violated at mu={} lambda={} family={} function={} n={} x={}: err={:e} > bound={:e}",
                v.kind,
                cfg.mu,
                cfg.lambda,
                cfg.family_id,
                cfg.function_id,
                c.n(),
                x,
                v.err,
                v.bound
            ));
        }
        max_ratio = max_ratio.max(r.ratio_peetre);
        let mut row = coords(cfg, c.n(), x);
        row.insert(3, cfg.function_id.as_str().into());
        row.extend([
            r.err.into(),
            r.bound_t31.into(),
            r.t31_checked.into(),
            r.bound_lip.into(),
            r.bound_peetre_rhs.into(),
            r.ratio_peetre.into(),
            r.quad_discrepancy.into(),
            (r.violations.len() as u64).into(),
        ]);
        t.push(row);
    }
    let checks: u64 = reports.iter().map(|r| u64::from(r.t31_checked) + u64::from(r.bound_lip.is_some())).sum();
    t.summary = vec![
        ("checks", checks.into()),
        ("violations", (violations.len() as u64).into()),
        ("max_ratio_peetre", max_ratio.into()),
        ("passed", violations.is_empty().into()),
    ];
    Ok(Report { table: t, violations })
}

/// Dispatch on the configured subcommand.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let table = match cfg.subcommand {
        Subcommand::Eval => run_eval(cfg)?,
        Subcommand::Moments => run_moments(cfg)?,
        Subcommand::Convergence => run_convergence(cfg)?,
        Subcommand::Verify => return run_verify(cfg),
    };
    Ok(Report { table, violations: Vec::new() })
}
