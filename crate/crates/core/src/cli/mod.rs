//! The `dga` batch harness: `eval`, `moments`, `convergence` and `verify` over a
//! grid of `n` and `x`, configured by a JSON file and/or flags.
//!
//! Exit status: 0 success, 1 invalid configuration, 2 a rate inequality failed,
//! 3 numerical failure (truncation or eigensolver).

pub mod catalog;
pub mod config;
pub mod drivers;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};

pub use config::{ConfigError, ConfigFile, FamilySpec, Format, RunConfig, Subcommand, XGrid};
pub use drivers::{execute, run_convergence, run_eval, run_moments, run_verify, Report};
pub use output::{Cell, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "dga", version, about = "Dunkl-Gamma operators on Dunkl-Appell polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Evaluate D_n^*(f; x) and the pointwise error over the grid.
    Eval(Flags),
    /// Compare closed-form and directly summed moments.
    Moments(Flags),
    /// Sup error per n and the empirical rate between consecutive n.
    Convergence(Flags),
    /// Check the rate inequalities at every grid point.
    Verify(Flags),
}

impl Command {
    fn split(self) -> (Subcommand, Flags) {
        match self {
            Command::Eval(f) => (Subcommand::Eval, f),
            Command::Moments(f) => (Subcommand::Moments, f),
            Command::Convergence(f) => (Subcommand::Convergence, f),
            Command::Verify(f) => (Subcommand::Verify, f),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub x_count: Option<usize>,
    /// Catalog id (one, trunc-exp, geometric, bump) or comma-separated coefficients.
    #[arg(long)]
    pub family: Option<String>,
    /// exp_decay, sine, runge, poly2, abs_pow(c,alpha), affine(a,b).
    #[arg(long)]
    pub function: Option<String>,
    /// Tail-mass tolerance of the series truncation.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Hölder exponent for the Lipschitz check.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hölder constant for the Lipschitz check.
    #[arg(long)]
    pub m_lip: Option<f64>,
}

impl Flags {
    fn overrides(&self, subcommand: Subcommand, file_grid: Option<&XGrid>) -> ConfigFile {
        let x_grid = if self.x_min.is_some() || self.x_max.is_some() || self.x_count.is_some() {
            let (min, max, count) = match file_grid {
                Some(&XGrid::Range { min, max, count }) => (min, max, count),
                _ => (0.0, 3.0, 31),
            };
            Some(XGrid::Range {
                min: self.x_min.unwrap_or(min),
                max: self.x_max.unwrap_or(max),
                count: self.x_count.unwrap_or(count),
            })
        } else {
            None
        };
        ConfigFile {
            subcommand: Some(subcommand),
            mu: self.mu,
            lambda: self.lambda,
            n_list: self.n.clone(),
            x_grid,
            family_id: self.family.as_deref().map(catalog::family_from_flag),
            function_id: self.function.clone(),
            trunc_eps: self.eps,
            quad_order: self.quad_order,
            output_path: self.out.clone(),
            format: self.format,
            alpha: self.alpha,
            m_lip: self.m_lip,
        }
    }
}

/// Build the validated run from parsed arguments, reading the config file if given.
pub fn resolve(command: Command) -> Result<RunConfig, ConfigError> {
    let (sub, flags) = command.split();
    let text = match &flags.config {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| ConfigError {
            source: Some(p.clone()),
            line: None,
            field: "config".into(),
            message: e.to_string(),
        })?),
        None => None,
    };
    let file_grid = match &text {
        Some(t) => config::parse_config_text(t, flags.config.as_deref())?.x_grid,
        None => None,
    };
    let overrides = flags.overrides(sub, file_grid.as_ref());
    RunConfig::resolve(text.as_deref(), flags.config.as_deref(), overrides)
}

fn exit_code_for(e: &crate::Error) -> u8 {
    match e {
        crate::Error::InvalidParameter { .. } | crate::Error::InvalidFamily(_) => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

/// Run a resolved configuration, writing output and diagnostics; returns the exit status.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code_for(&e);
        }
    };
    let written = match &cfg.output_path {
        Some(p) => fs::File::create(p).and_then(|f| report.table.write(cfg.format, std::io::BufWriter::new(f))),
        None => report.table.write(cfg.format, &mut *stdout),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_VALIDATION;
    }
    for v in &report.violations {
        let _ = writeln!(stderr, "{v}");
    }
    if cfg.subcommand == Subcommand::Verify {
        let _ = writeln!(stderr, "{} grid points, {} violations", report.table.rows.len(), report.violations.len());
    }
    if report.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Parse `args`, run, and report through the process streams.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK });
        }
    };
    let cfg = match resolve(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let code = run(&cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}
