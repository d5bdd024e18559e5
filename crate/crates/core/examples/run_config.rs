//! Drive the batch harness from code: build a run, execute it, print CSV.
//!
//! cargo run --example run_config

use dunkl_appell::cli::{execute, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = r#"{
        "mu": 0.5,
        "lambda": 0.7,
        "n_list": [4, 16, 64],
        "x_grid": {"min": 0.5, "max": 2.0, "count": 4},
        "family_id": "bump",
        "function_id": "sine"
    }"#;
    let overrides = serde_json::from_str(r#"{"subcommand": "verify"}"#)?;
    let cfg = RunConfig::resolve(Some(text), None, overrides)?;
    let report = execute(&cfg)?;
    report.table.write_csv(std::io::stdout())?;
    for (k, v) in &report.table.summary {
        eprintln!("{k}: {v:?}");
    }
    Ok(())
}
