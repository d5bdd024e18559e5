//! Normalized Dunkl-Appell families, their polynomials and the symbol values
//! that enter the moment formulas.
//!
//! cargo run --example appell_families

use dunkl_appell::appell::{AppellFamily, CATALOG_IDS};

fn main() -> dunkl_appell::Result<()> {
    let mu = 0.5;
    for id in CATALOG_IDS {
        let fam = AppellFamily::catalog(id, mu)?;
        let s = fam.scalars();
        println!(
            "{id:>10}: degree {:>2}  A(1) = {:.6}  A(-1) = {:.6}  A'(1) = {:.6}  A''(1) = {:.6}",
            fam.degree(),
            s.a1,
            s.am1,
            s.ap1,
            s.app1
        );
    }

    // a custom symbol from raw coefficients; scaling does not matter
    let fam = AppellFamily::new(&[2.0, 1.0, 0.5], mu)?.with_label("custom");
    println!("\n{} coefficients after normalization: {:?}", fam.label(), fam.coeffs());
    for k in 0..5 {
        println!("  p_{k}(1.5) = {:.10}", fam.p(k, 1.5)?);
    }
    let r = fam.gen_check(1.0, 0.5, 80)?;
    println!("generating-function residual at (x, t) = (1, 0.5): {r:.2e}");
    Ok(())
}
