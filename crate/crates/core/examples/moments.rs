//! Closed-form moments against directly summed ones.
//!
//! cargo run --example moments

use dunkl_appell::analysis::{closed_moments, empirical_moments};
use dunkl_appell::{AppellFamily, OperatorConfig};

fn main() -> dunkl_appell::Result<()> {
    println!(
        "{:>10} {:>4} {:>5} {:>4} {:>5} {:>14} {:>14} {:>10}",
        "family", "mu", "lam", "n", "x", "Omega1", "Omega2", "rel diff"
    );
    for id in ["one", "bump"] {
        for &mu in &[0.0, 1.5] {
            for &n in &[4, 256] {
                let c = OperatorConfig::new(n, 0.7, AppellFamily::catalog(id, mu)?)?;
                for &x in &[0.1, 2.0] {
                    let a = closed_moments(&c, x);
                    let b = empirical_moments(&c, x)?;
                    println!(
                        "{id:>10} {mu:>4} {:>5} {n:>4} {x:>5} {:>14.6e} {:>14.6e} {:>10.1e}",
                        0.7,
                        a.omega1,
                        a.omega2c,
                        a.max_rel_discrepancy(&b)
                    );
                }
            }
        }
    }

    // n Omega2 / 2x -> 1
    let c = OperatorConfig::new(10_000, 0.0, AppellFamily::catalog("trunc-exp", 0.5)?)?;
    let w = closed_moments(&c, 1.0).omega2c;
    println!("\nn = 10^4, x = 1: n Omega2 / 2x = {:.5}", 1e4 * w / 2.0);
    Ok(())
}
