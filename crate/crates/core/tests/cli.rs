use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dga")).args(args).output().expect("run dga")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn eval_specialization_value() {
    let o = dga(&[
        "eval",
        "--mu",
        "0",
        "--n",
        "10",
        "--x-min",
        "1",
        "--x-max",
        "1",
        "--x-count",
        "1",
        "--function",
        "affine(1,0)",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("mu,lambda,family,function,n,x,value,f_x,err\n"));
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[3], "affine(1,0)");
    let value: f64 = row[6].parse().unwrap();
    assert!((value - 1.1).abs() < 1e-12);
}

#[test]
fn eval_of_constant_has_tiny_error() {
    let o = dga(&[
        "eval",
        "--mu",
        "1.5",
        "--lambda",
        "0.7",
        "--family",
        "geometric",
        "--n",
        "4,64",
        "--function",
        "affine(0,1)",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2 * 31);
    for r in rows {
        assert!(r["err"].as_f64().unwrap() <= 1e-12 + 1e-13);
        assert_eq!(r["mu"], 1.5);
    }
}

#[test]
fn moments_row_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "m.json",
        r#"{
  "subcommand": "moments",
  "mu": 0.0,
  "lambda": 0.0,
  "n_list": [10],
  "x_grid": [1.0],
  "family_id": "one",
  "format": "json"
}"#,
    );
    let o = dga(&["moments", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v["rows"][0];
    assert!((row["omega2"].as_f64().unwrap() - 0.22).abs() < 1e-13);
    assert!((row["lambda_n"].as_f64().unwrap() - 0.21).abs() < 1e-13);
    assert!((row["m0"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(row["max_rel_discrepancy"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn inline_family_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"family_id": [1.0, 0.0, 1.0], "mu": 0.5, "x_grid": {"min": 0.5, "max": 2.0, "count": 4}}"#,
    );
    let o = dga(&["moments", "--config", &cfg, "--mu", "1.5", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.starts_with("1.5,0.0,[1.0;0.0;1.0],16,")));
}

#[test]
fn output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = dga(&[
            "verify",
            "--mu",
            "0.5",
            "--family",
            "trunc-exp",
            "--n",
            "1,16,256",
            "--function",
            "sine",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn convergence_rates() {
    let o = dga(&["convergence", "--mu", "0.5", "--family", "bump", "--n", "25,100,400,1600", "--function", "poly2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rates: Vec<f64> = out.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rates.len(), 3);
    assert!((rates[2] + 1.0).abs() < 0.05, "{rates:?}");

    let o = dga(&["convergence", "--mu", "0.5", "--n", "1,4,16,64", "--function", "exp_decay"]);
    let errs: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(8).unwrap().parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn verify_passes_for_lipschitz_function() {
    let o = dga(&[
        "verify",
        "--mu",
        "0.5",
        "--lambda",
        "0.7",
        "--family",
        "geometric",
        "--n",
        "1,4,16,64",
        "--function",
        "abs_pow(1,0.5)",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["violations"], 0);
    assert_eq!(v["summary"]["passed"], true);
    assert!(v["rows"][0]["quad_discrepancy"].is_number());
}

#[test]
fn verify_reports_violations_with_exit_two() {
    // a Hölder constant far too small for |t - 1|
    let o = dga(&["verify", "--n", "4", "--function", "abs_pow(1,1)", "--alpha", "1", "--m-lip", "0.01"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("Lipschitz violated at mu=0 lambda=0 family=one function=abs_pow(1,1) n=4 x="), "{err}");
}

#[test]
fn validation_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\n  \"mu\": 0.5,\n  \"n_list\": [4, 16],\n  \"x_grid\": []\n}\n");
    let o = dga(&["eval", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.json:4: `x_grid`"), "{}", stderr(&o));

    let cfg = write(dir.path(), "syntax.json", "{\n  \"mu\": 0.5,\n  \"lambda\" 1\n}\n");
    let o = dga(&["eval", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("syntax.json:3:"), "{}", stderr(&o));

    for args in [
        vec!["convergence", "--n", "10"],
        vec!["eval", "--mu", "-1"],
        vec!["eval", "--family", "0,1"],
        vec!["eval", "--function", "cosh"],
        vec!["eval", "--n", "16,4"],
        vec!["eval", "--x-min", "2", "--x-max", "1"],
        vec!["verify", "--function", "runge"],
        vec!["eval", "--bogus"],
    ] {
        assert_eq!(dga(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_three() {
    let o = dga(&["eval", "--n", "1000000", "--x-min", "5", "--x-max", "5", "--x-count", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("truncation cap"));
}
