//! Evaluate the operator on a few functions and compare with the reductions.
//!
//! cargo run --example evaluate_operator

use dunkl_appell::operators::{
    apply, ciupa_apply, classical_coefficients, wafi_rao_apply, weights, OperatorConfig, SeriesOptions,
};
use dunkl_appell::{AppellFamily, ScalarFunction};

fn main() -> dunkl_appell::Result<()> {
    let family = AppellFamily::catalog("geometric", 0.5)?;
    let config = OperatorConfig::new(64, 0.7, family)?;

    let p = weights(&config, 1.0)?;
    println!("weights at x = 1: {} terms, tail mass {:.1e}", p.k_used + 1, p.tail_mass);

    let fs = [
        ScalarFunction::exp_decay(),
        ScalarFunction::sine(),
        ScalarFunction::runge(),
        ScalarFunction::abs_pow(1.0, 0.5),
    ];
    for f in &fs {
        for &x in &[0.5, 1.0, 2.0] {
            let v = apply(&config, f, x)?;
            println!(
                "{:>16}  x = {x}: D f = {v:.10}  f = {:.10}  err = {:.2e}",
                f.name(),
                f.eval(x),
                (v - f.eval(x)).abs()
            );
        }
    }

    // mu = 0 reduces to the classical Appell-Durrmeyer operator
    let opts = SeriesOptions::default();
    let fam0 = AppellFamily::catalog("trunc-exp", 0.0)?;
    let g = classical_coefficients(&fam0)?;
    let c0 = OperatorConfig::new(16, 0.7, fam0)?;
    let f = ScalarFunction::sine();
    println!("\nmu = 0:  {:.15}  vs classical {:.15}", apply(&c0, &f, 1.0)?, ciupa_apply(16, 0.7, &g, &f, 1.0, &opts)?);

    // A = 1 reduces to the Dunkl Szasz-Durrmeyer operator
    let c1 = OperatorConfig::new(16, 0.7, AppellFamily::catalog("one", 1.5)?)?;
    println!(
        "A = 1:   {:.15}  vs Dunkl-Szasz {:.15}",
        apply(&c1, &f, 1.0)?,
        wafi_rao_apply(16, 0.7, 1.5, &f, 1.0, &opts)?
    );
    Ok(())
}
