//! Test-function and family ids understood by the harness.

use crate::appell::AppellFamily;
use crate::function::ScalarFunction;

use super::config::FamilySpec;

/// Function ids; the two parametrized entries take their arguments in parentheses.
pub const FUNCTION_IDS: [&str; 6] = ["exp_decay", "sine", "runge", "poly2", "abs_pow(c,alpha)", "affine(a,b)"];

fn args<const N: usize>(id: &str, name: &str) -> Option<Result<[f64; N], String>> {
    let inner = id.strip_prefix(name)?.trim().strip_prefix('(')?.strip_suffix(')')?;
    let parsed: Result<Vec<f64>, _> = inner.split(',').map(|s| s.trim().parse::<f64>()).collect();
    Some(match parsed {
        Ok(v) if v.len() == N && v.iter().all(|a| a.is_finite()) => Ok(v.try_into().unwrap()),
        Ok(v) => Err(format!("`{name}` takes {N} finite arguments, got {}", v.len())),
        Err(e) => Err(format!("bad argument to `{name}`: {e}")),
    })
}

/// Look up a catalog function by id, e.g. `sine` or `abs_pow(1, 0.5)`.
pub fn parse_function(id: &str) -> Result<ScalarFunction, String> {
    let id = id.trim();
    match id {
        "exp_decay" => return Ok(ScalarFunction::exp_decay()),
        "sine" => return Ok(ScalarFunction::sine()),
        "runge" => return Ok(ScalarFunction::runge()),
        "poly2" => return Ok(ScalarFunction::monomial(2)),
        _ => {}
    }
    if let Some(a) = args::<2>(id, "abs_pow") {
        let [c, alpha] = a?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(format!("abs_pow exponent must lie in (0, 1], got {alpha}"));
        }
        return Ok(ScalarFunction::abs_pow(c, alpha));
    }
    if let Some(a) = args::<2>(id, "affine") {
        let [a, b] = a?;
        return Ok(ScalarFunction::affine(a, b));
    }
    Err(format!("unknown function id `{id}`; known: {}", FUNCTION_IDS.join(", ")))
}

/// Read a `--family` flag: a catalog id, or comma-separated raw coefficients.
pub fn family_from_flag(s: &str) -> FamilySpec {
    let parsed: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match parsed {
        Ok(v) if !v.is_empty() => FamilySpec::Coeffs(v),
        _ => FamilySpec::Id(s.trim().to_string()),
    }
}

pub fn parse_family(spec: &FamilySpec, mu: f64) -> crate::Result<AppellFamily> {
    match spec {
        FamilySpec::Id(id) => AppellFamily::catalog(id, mu),
        FamilySpec::Coeffs(c) => Ok(AppellFamily::new(c, mu)?.with_label(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_ids() {
        for id in ["exp_decay", "sine", "runge", "poly2", "abs_pow(1,0.5)", "affine(0, 1)", " abs_pow( 2 , 1 ) "] {
            assert!(parse_function(id).is_ok(), "{id}");
        }
        assert_eq!(parse_function("affine(2,1)").unwrap().eval(3.0), 7.0);
        assert_eq!(parse_function("abs_pow(1,0.5)").unwrap().eval(5.0), 2.0);
        for id in ["cosh", "abs_pow(1)", "abs_pow(1,2)", "affine(a,b)", "affine(1,2,3)", "sine(1)"] {
            assert!(parse_function(id).is_err(), "{id}");
        }
    }

    #[test]
    fn family_flags() {
        assert_eq!(family_from_flag("bump"), FamilySpec::Id("bump".into()));
        assert_eq!(family_from_flag("1,0,1"), FamilySpec::Coeffs(vec![1.0, 0.0, 1.0]));
        assert_eq!(family_from_flag("2"), FamilySpec::Coeffs(vec![2.0]));
        let f = parse_family(&FamilySpec::Coeffs(vec![1.0, 0.0, 1.0]), 0.5).unwrap();
        assert_eq!(f.label(), "[1.0;0.0;1.0]");
    }
}
