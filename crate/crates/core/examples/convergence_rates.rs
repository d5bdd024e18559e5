//! Error decay and the rate bounds along a sequence of n.
//!
//! cargo run --example convergence_rates

use dunkl_appell::analysis::verify_bounds;
use dunkl_appell::operators::apply_monomial;
use dunkl_appell::{AppellFamily, OperatorConfig, ScalarFunction};

fn main() -> dunkl_appell::Result<()> {
    let family = AppellFamily::catalog("trunc-exp", 0.5)?;
    let base = OperatorConfig::new(1, 0.0, family)?;
    let xs: Vec<f64> = (0..=60).map(|i| f64::from(i) * 0.05).collect();

    println!("sup over [0, 3] of |D(t^2; x) - x^2|:");
    let mut prev: Option<f64> = None;
    for n in [25, 100, 400, 1600] {
        let c = base.with_n(n)?;
        let mut sup = 0.0f64;
        for &x in &xs {
            sup = sup.max((apply_monomial(&c, 2, x)? - x * x).abs());
        }
        let order = prev.map(|p| -(sup / p).ln() / 4f64.ln());
        println!("  n = {n:>5}: {sup:.6e}  order {}", order.map_or("-".into(), |o| format!("{o:.4}")));
        prev = Some(sup);
    }

    println!("\nbounds at x = 1:");
    let f = ScalarFunction::abs_pow(1.0, 0.5);
    for n in [4, 64, 1024] {
        let r = verify_bounds(&base.with_n(n)?, &f, 1.0, f.lipschitz())?;
        println!(
            "  n = {n:>5}: err {:.3e}  modulus bound {:.3e}  Hölder bound {:.3e}  Peetre ratio {:.3}",
            r.err,
            r.bound_t31,
            r.bound_lip.unwrap_or(f64::NAN),
            r.ratio_peetre
        );
    }
    Ok(())
}
