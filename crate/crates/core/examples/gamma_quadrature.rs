//! Gauss rules for Gamma densities with real shape.
//!
//! cargo run --example gamma_quadrature

use dunkl_appell::quadrature::{build_rule, gamma_expectation, gamma_moment_exact, RuleCache};

fn main() -> dunkl_appell::Result<()> {
    let rule = build_rule(3.7, 8)?;
    println!("order-8 rule for u^3.7 e^-u:");
    for (u, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  node {u:>20.15}  weight {w:.15e}");
    }

    // exact up to degree 15
    for j in [1, 5, 15, 16] {
        let got = rule.integrate(|u| u.powi(j as i32));
        let exact = gamma_moment_exact(j, 3.7, 1.0);
        println!("E[U^{j:>2}]: rule {got:.15e}  exact {exact:.15e}");
    }

    // expectation of f(T) for T ~ Gamma(m + 1, rate n)
    let cache = RuleCache::new();
    let (m, n) = (12.3, 10.0);
    let r48 = cache.get(m, 48)?;
    let r96 = cache.get(m, 96)?;
    let a = gamma_expectation(f64::sin, m, n, &r48);
    let b = gamma_expectation(f64::sin, m, n, &r96);
    println!("E[sin T], m = {m}, n = {n}: Q=48 {a:.15}  Q=96 {b:.15}");
    Ok(())
}
