use std::process::Command;

use tglab::heatmeasure::{kakutani_series, partition_function, BetaProfile, Transform};
use tglab::lattice::{holonomy, Config};

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_tglab"))
        .args(args)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn ok(args: &[&str]) -> String {
    let (out, code) = run(args);
    assert_eq!(code, 0, "{args:?}");
    out
}

fn line<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no `{key}` line in {out}"))
}

#[test]
fn thompson_examples() {
    assert_eq!(ok(&["thompson", "mul", "A", "A^-1"]).trim(), "identity");
    assert_eq!(
        ok(&["thompson", "orbit", "r2", "1/4", "--steps", "4"]),
        "1/4\n1/2\n3/4\n0\n1/4\n"
    );
    assert_eq!(ok(&["thompson", "classify", "r3"]).trim(), "T_only");
    assert_eq!(ok(&["thompson", "classify", "A*B^-1"]).trim(), "F");
    let inv = ok(&["thompson", "inv", "A"]);
    assert_eq!(inv.trim(), "{range: (* (* *)), domain: ((* *) *), perm: [1,2,3]}");
}

#[test]
fn holonomy_example() {
    let args = ["lattice", "holonomy", "--group", "zmod:7", "--tree", "( * * )", "--values", "3,5"];
    assert_eq!(ok(&args).trim(), "{0:1, 1/2:5}");
    let x: Config = serde_json::from_str(r#"{"group":"zmod:7","tree":"(* *)","values":[3,5]}"#).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "json", "lattice", "holonomy", "--group", "zmod:7", "--tree", "(* *)", "--values", "3,5"]))
            .unwrap();
    for (d, g) in holonomy(&x) {
        assert_eq!(json[d.to_string()], g);
    }
}

#[test]
fn gauge_and_jones() {
    let out = ok(&["lattice", "gauge", "--group", "zmod:5", "--tree", "(* (* *))", "--values", "1,2,3", "--gauge", "4,0,1"]);
    assert_eq!(line(&out, "values"), "0,1,0");
    let out = ok(&["lattice", "jones", "--group", "zmod:5", "--tree", "(* (* *))", "--values", "1,2,3", "--element", "A"]);
    assert_eq!(line(&out, "tree"), "((* *) *)");
    assert_eq!(line(&out, "values"), "1,2,3");
    let out = ok(&["lattice", "jones", "--group", "zmod:5", "--tree", "((* *) *)", "--values", "1,2,3", "--element", "A"]);
    assert_eq!(line(&out, "tree"), "*");
    assert_eq!(line(&out, "values"), "1");
}

#[test]
fn state_checks() {
    let out = ok(&["state", "check-preserving", "--group", "zmod:2", "--seed", "7"]);
    assert_eq!(line(&out, "residual"), "0");
    let out = ok(&["state", "check-jones", "--const-weights", "w:3/4,1/4", "--seed", "7"]);
    assert_eq!(line(&out, "residual"), "0");
    let out = ok(&["state", "check-gauge", "--group", "zmod:3", "--seed", "11"]);
    assert_eq!(line(&out, "residual"), "0");
    let out = ok(&[
        "state",
        "eval",
        "--element",
        r#"{"group":"zmod:2","tree":"*","terms":[{"label":[1],"coeffs":[["1","0"],["1","0"]]}]}"#,
        "--const-weights",
        "w:3/4,1/4",
    ]);
    assert_eq!(out.lines().nth(1).unwrap(), "0.5 0");
}

#[test]
fn measure_examples() {
    let out = ok(&["measure", "kakutani", "--beta", "tau:3", "--transform", "halve", "--levels", "14"]);
    assert_eq!(line(&out, "verdict"), "Singular");
    let out = ok(&["measure", "kakutani", "--beta", "tau:3", "--transform", "translate:{0}@1", "--levels", "14"]);
    assert_eq!(line(&out, "verdict"), "Equivalent");
    let out = ok(&["measure", "zb", "--b", "6.283185307"]);
    assert!(out.starts_with("1.0864348"), "{out}");
    let z: f64 = out.trim().parse().unwrap();
    assert!((z - partition_function(6.283185307).unwrap()).abs() < 1e-14);
}

/// Equal up to rounding in the last bits, which can move with the optimization level.
fn close(a: &serde_json::Value, b: &serde_json::Value) {
    use serde_json::Value;
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()), "{x} vs {y}");
        }
        (Value::Array(x), Value::Array(y)) => {
            assert_eq!(x.len(), y.len());
            x.iter().zip(y).for_each(|(x, y)| close(x, y));
        }
        (Value::Object(x), Value::Object(y)) => {
            assert_eq!(x.keys().collect::<Vec<_>>(), y.keys().collect::<Vec<_>>());
            x.iter().for_each(|(k, v)| close(v, &y[k]));
        }
        _ => assert_eq!(a, b),
    }
}

#[test]
fn kakutani_json_matches_library() {
    let out = ok(&["--format", "json", "measure", "kakutani", "--beta", "const:1", "--transform", "translate:{0}@1", "--levels", "8"]);
    let report = kakutani_series(&"const:1".parse::<BetaProfile>().unwrap(), &"translate:{0}@1".parse::<Transform>().unwrap(), 8);
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    close(&parsed, &serde_json::to_value(&report).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["thompson", "mul", "A^"]).1, 2);
    assert_eq!(run(&["lattice", "holonomy", "--group", "zmod:7", "--tree", "(* *)", "--values", "3"]).1, 2);
    assert_eq!(run(&["measure", "zb", "--b", "-1"]).1, 2);
    assert_eq!(run(&["--format", "csv", "measure", "zb", "--b", "1"]).1, 2);
    let (out, code) = run(&["measure", "kakutani", "--beta", "ell:1,0.5,0.25", "--transform", "halve", "--levels", "6"]);
    assert_eq!(line(&out, "verdict"), "Inconclusive");
    assert_eq!(code, 3);
}

#[test]
fn deterministic_output() {
    let args = ["--format", "json", "state", "check-jones", "--group", "zmod:3", "--seed", "42", "--samples", "20"];
    assert_eq!(ok(&args), ok(&args));
    let csv = ["--format", "csv", "measure", "semifinite", "--beta", "tau:3", "--levels", "6"];
    assert_eq!(ok(&csv), ok(&csv));
}
