//! Run configuration: a JSON file whose keys mirror [`RunConfig`], overridden by flags.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::catalog::{parse_family, parse_function};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Eval,
    Moments,
    Convergence,
    Verify,
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcommand::Eval => "eval",
            Subcommand::Moments => "moments",
            Subcommand::Convergence => "convergence",
            Subcommand::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `x_grid`: an explicit list or an evenly spaced `(min, max, count)` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XGrid {
    List(Vec<f64>),
    Range { min: f64, max: f64, count: usize },
}

impl XGrid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            XGrid::List(ref v) => v.clone(),
            XGrid::Range { count: 0, .. } => Vec::new(),
            XGrid::Range { min, count: 1, .. } => vec![min],
            XGrid::Range { min, max, count } => {
                let last = (count - 1) as f64;
                (0..count).map(|i| min + (max - min) * (i as f64 / last)).collect()
            }
        }
    }
}

/// A catalog id or an inline coefficient list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Id(String),
    Coeffs(Vec<f64>),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Id(id) => f.write_str(id),
            FamilySpec::Coeffs(c) => {
                let parts: Vec<String> = c.iter().map(|v| format!("{v:?}")).collect();
                write!(f, "[{}]", parts.join(";"))
            }
        }
    }
}

/// Contents of a config file; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub subcommand: Option<Subcommand>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub n_list: Option<Vec<u64>>,
    pub x_grid: Option<XGrid>,
    pub family_id: Option<FamilySpec>,
    pub function_id: Option<String>,
    pub trunc_eps: Option<f64>,
    pub quad_order: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    /// Hölder exponent for the Lipschitz check in `verify`.
    pub alpha: Option<f64>,
    /// Hölder constant for the Lipschitz check in `verify`.
    pub m_lip: Option<f64>,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub mu: f64,
    pub lambda: f64,
    pub n_list: Vec<u64>,
    pub x_grid: Vec<f64>,
    pub family_id: FamilySpec,
    pub function_id: String,
    pub trunc_eps: f64,
    pub quad_order: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub alpha: Option<f64>,
    pub m_lip: Option<f64>,
}

/// A configuration problem, located in the config file when it came from there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub source: Option<PathBuf>,
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, self.line) {
            (Some(p), Some(l)) => write!(f, "{}:{l}: ", p.display())?,
            (Some(p), None) => write!(f, "{}: ", p.display())?,
            _ => {}
        }
        write!(f, "`{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

struct Located<'a> {
    source: Option<&'a Path>,
    text: Option<&'a str>,
    from_file: Vec<&'static str>,
}

impl Located<'_> {
    fn err(&self, field: &str, message: impl Into<String>) -> ConfigError {
        let in_file = self.from_file.contains(&field);
        let line = if in_file { self.text.and_then(|t| line_of_key(t, field)) } else { None };
        ConfigError {
            source: if in_file { self.source.map(Path::to_path_buf) } else { None },
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// 1-based line of the first occurrence of `"key"` followed by a colon.
pub fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines()
        .position(|l| l.find(&quoted).is_some_and(|i| l[i + quoted.len()..].trim_start().starts_with(':')))
        .map(|i| i + 1)
}

/// Parse a config file's text.
pub fn parse_config_text(text: &str, source: Option<&Path>) -> Result<ConfigFile, ConfigError> {
    serde_json::from_str(text).map_err(|e| {
        let field = unknown_field(&e.to_string()).unwrap_or_else(|| "config".to_string());
        ConfigError { source: source.map(Path::to_path_buf), line: Some(e.line()), field, message: e.to_string() }
    })
}

fn unknown_field(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

macro_rules! merge {
    ($file:ident, $over:ident, $from:ident, $($field:ident),*) => {
        $(
            let $field = match $over.$field.take() {
                Some(v) => Some(v),
                None => {
                    if $file.$field.is_some() {
                        $from.push(stringify!($field));
                    }
                    $file.$field.take()
                }
            };
        )*
    };
}

impl RunConfig {
    /// Merge a config file (`text`, read from `source`) with flag overrides and validate.
    pub fn resolve(text: Option<&str>, source: Option<&Path>, overrides: ConfigFile) -> Result<Self, ConfigError> {
        let mut file = match text {
            Some(t) => parse_config_text(t, source)?,
            None => ConfigFile::default(),
        };
        let mut over = overrides;
        let mut from_file = Vec::new();
        merge!(
            file,
            over,
            from_file,
            subcommand,
            mu,
            lambda,
            n_list,
            x_grid,
            family_id,
            function_id,
            trunc_eps,
            quad_order,
            output_path,
            format,
            alpha,
            m_lip
        );
        let loc = Located { source, text, from_file };

        let subcommand = subcommand.ok_or_else(|| loc.err("subcommand", "missing"))?;
        let mu = mu.unwrap_or(0.0);
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(loc.err("mu", format!("must be finite and >= 0, got {mu}")));
        }
        let lambda = lambda.unwrap_or(0.0);
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(loc.err("lambda", format!("must be finite and >= 0, got {lambda}")));
        }
        let n_list = n_list.unwrap_or_else(|| vec![10]);
        if n_list.is_empty() {
            return Err(loc.err("n_list", "must not be empty"));
        }
        if n_list.contains(&0) {
            return Err(loc.err("n_list", "entries must be positive integers"));
        }
        if n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(loc.err("n_list", "must be strictly ascending"));
        }
        if subcommand == Subcommand::Convergence && n_list.len() < 3 {
            return Err(loc.err("n_list", format!("convergence needs at least 3 values of n, got {}", n_list.len())));
        }
        let grid = x_grid.unwrap_or(XGrid::Range { min: 0.0, max: 3.0, count: 31 });
        if let XGrid::Range { min, max, count } = grid {
            if count > 1 && !(max > min) {
                return Err(loc.err("x_grid", format!("need max > min, got min = {min}, max = {max}")));
            }
        }
        let x_grid = grid.points();
        if x_grid.is_empty() {
            return Err(loc.err("x_grid", "must contain at least one point"));
        }
        if let Some(bad) = x_grid.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(loc.err("x_grid", format!("points must be finite and >= 0, got {bad}")));
        }
        let family_id = family_id.unwrap_or_else(|| FamilySpec::Id("one".into()));
        parse_family(&family_id, mu).map_err(|e| loc.err("family_id", e.to_string()))?;
        let function_id = function_id.unwrap_or_else(|| "exp_decay".into());
        parse_function(&function_id).map_err(|e| loc.err("function_id", e))?;
        let trunc_eps = trunc_eps.unwrap_or(1e-12);
        if !(trunc_eps > 0.0 && trunc_eps < 1.0) {
            return Err(loc.err("trunc_eps", format!("must lie in (0, 1), got {trunc_eps}")));
        }
        let quad_order = quad_order.unwrap_or(crate::quadrature::DEFAULT_ORDER);
        if quad_order == 0 {
            return Err(loc.err("quad_order", "must be a positive integer"));
        }
        if let Some(a) = alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(loc.err("alpha", format!("must lie in (0, 1], got {a}")));
            }
        }
        if let Some(m) = m_lip {
            if !(m.is_finite() && m >= 0.0) {
                return Err(loc.err("m_lip", format!("must be finite and >= 0, got {m}")));
            }
        }
        if alpha.is_some() != m_lip.is_some() {
            let missing = if alpha.is_some() { "m_lip" } else { "alpha" };
            return Err(loc.err(missing, "alpha and m_lip must be given together"));
        }
        Ok(Self {
            subcommand,
            mu,
            lambda,
            n_list,
            x_grid,
            family_id,
            function_id,
            trunc_eps,
            quad_order,
            output_path,
            format: format.unwrap_or_default(),
            alpha,
            m_lip,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn over(sub: Subcommand) -> ConfigFile {
        ConfigFile { subcommand: Some(sub), ..Default::default() }
    }

    #[test]
    fn grid_points() {
        assert_eq!(XGrid::Range { min: 0.0, max: 1.0, count: 3 }.points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(XGrid::Range { min: 2.0, max: 2.0, count: 1 }.points(), vec![2.0]);
        assert!(XGrid::Range { min: 0.0, max: 1.0, count: 0 }.points().is_empty());
    }

    #[test]
    fn defaults_resolve() {
        let c = RunConfig::resolve(None, None, over(Subcommand::Eval)).unwrap();
        assert_eq!(c.n_list, vec![10]);
        assert_eq!(c.x_grid.len(), 31);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn flags_override_file() {
        let text = "{\n  \"subcommand\": \"eval\",\n  \"mu\": 0.5,\n  \"n_list\": [4, 16]\n}\n";
        let o = ConfigFile { mu: Some(1.5), ..Default::default() };
        let c = RunConfig::resolve(Some(text), None, o).unwrap();
        assert_eq!(c.mu, 1.5);
        assert_eq!(c.n_list, vec![4, 16]);
    }

    #[test]
    fn errors_point_at_the_line() {
        let text = "{\n  \"subcommand\": \"eval\",\n  \"mu\": 0.5,\n  \"x_grid\": []\n}\n";
        let e = RunConfig::resolve(Some(text), Some(Path::new("run.json")), ConfigFile::default()).unwrap_err();
        assert_eq!(e.line, Some(4));
        assert_eq!(e.field, "x_grid");
        assert!(e.to_string().starts_with("run.json:4: `x_grid`"));

        let text = "{\n  \"subcommand\": \"eval\",\n  \"bogus\": 1\n}";
        let e = RunConfig::resolve(Some(text), None, ConfigFile::default()).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(3), "bogus"));

        let text = "{\n  \"subcommand\": \"convergence\",\n\n  \"n_list\": [10]\n}";
        let e = RunConfig::resolve(Some(text), None, ConfigFile::default()).unwrap_err();
        assert_eq!(e.line, Some(4));
    }

    #[test]
    fn flag_errors_have_no_line() {
        let text = "{\n  \"subcommand\": \"eval\",\n  \"mu\": 0.5\n}";
        let o = ConfigFile { mu: Some(-1.0), ..Default::default() };
        let e = RunConfig::resolve(Some(text), None, o).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (None, "mu"));
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            ConfigFile { n_list: Some(vec![]), ..over(Subcommand::Eval) },
            ConfigFile { n_list: Some(vec![16, 4]), ..over(Subcommand::Eval) },
            ConfigFile { lambda: Some(-0.5), ..over(Subcommand::Eval) },
            ConfigFile { trunc_eps: Some(2.0), ..over(Subcommand::Eval) },
            ConfigFile { quad_order: Some(0), ..over(Subcommand::Eval) },
            ConfigFile { function_id: Some("cosh".into()), ..over(Subcommand::Eval) },
            ConfigFile { family_id: Some(FamilySpec::Id("nope".into())), ..over(Subcommand::Eval) },
            ConfigFile { family_id: Some(FamilySpec::Coeffs(vec![0.0, 1.0])), ..over(Subcommand::Eval) },
            ConfigFile { x_grid: Some(XGrid::List(vec![-1.0])), ..over(Subcommand::Eval) },
            ConfigFile { alpha: Some(0.5), ..over(Subcommand::Verify) },
            ConfigFile::default(),
        ];
        for o in bad {
            assert!(RunConfig::resolve(None, None, o.clone()).is_err(), "{o:?}");
        }
    }
}
