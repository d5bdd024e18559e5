//! Dunkl factorials, the Dunkl exponential and the Dunkl derivative.
//!
//! cargo run --example dunkl_functions

use dunkl_appell::dunkl::{dunkl_derivative, e_mu, e_ratio, GammaTable};

fn main() -> dunkl_appell::Result<()> {
    let mu = 0.5;
    let table = GammaTable::new(mu, 10)?;
    println!("gamma_mu(k), mu = {mu}:");
    for k in 0..=6 {
        println!("  k = {k}: {}", table.gamma(k)?);
    }

    for &(mu, x) in &[(0.0, 1.0), (0.5, 2.0), (1.5, 3.0), (0.5, -2.0)] {
        println!("e_{mu}({x}) = {:.15}", e_mu(mu, x, 1e-17)?);
    }

    // e_mu(-y)/e_mu(y) decays only like mu/(2y) once mu > 0
    for &y in &[1.0, 15.0, 100.0, 1e4] {
        println!(
            "y = {y:>7}: ratio mu=0 {:.3e}  mu=0.5 {:.3e}  mu=1.5 {:.3e}",
            e_ratio(0.0, y),
            e_ratio(0.5, y),
            e_ratio(1.5, y)
        );
    }

    // T_mu e_mu(c t) = c e_mu(c t)
    let c = 0.8;
    let e = |t: f64| e_mu(mu, c * t, 1e-16).unwrap();
    for &t in &[-1.0, 0.0, 0.7] {
        let lhs = dunkl_derivative(e, t, mu, 1e-5);
        println!("T_mu e(c t) at t = {t:>4}: {lhs:.10}  vs  c e(c t) = {:.10}", c * e(t));
    }
    Ok(())
}
