use minkowski_gauge::bodies;
use minkowski_gauge::convex;
use minkowski_gauge_cli::{run, EXIT_INPUT, EXIT_OK};
use serde_json::Value;
use std::io::Write;
use std::process::Command;

const TRIANGLE: &str = r#"{"kind":"vpolytope","vertices":[[10,10],[16,10],[10,16]]}"#;
const SQUARE: &str = r#"{"kind":"box","low":[-1,-1],"high":[1,1]}"#;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mgauge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_ok(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn body_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn alpha_on_the_triangle() {
    let f = body_file(TRIANGLE);
    let v = json_ok(&["alpha", "--body", f.path().to_str().unwrap(), "--point", "12,12"]);
    assert_eq!(v["method"], "closed_form");
    assert!((v["alpha"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-11);
    assert!(v["tol"].as_f64().is_some());
    assert_eq!(v["witness_dir"].as_array().unwrap().len(), 2);
}

#[test]
fn symmetry_of_the_prism() {
    let v = json_ok(&["symmetry", "--body", r#"{"kind":"sobczyk_prism"}"#]);
    assert!((v["alpha_inf"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(v["critical_dim_estimate"], 1);
    assert!((v["klee_lhs"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn grid_over_the_square() {
    let f = body_file(SQUARE);
    let (code, out, err) = call(&["grid", "--body", f.path().to_str().unwrap(), "--low", "-3,-3", "--high", "3,3", "--steps", "61"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["x1", "x2", "alpha"]);
    let rows: Vec<[f64; 3]> = rd
        .records()
        .map(|r| {
            let r = r.unwrap();
            [r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()]
        })
        .collect();
    assert_eq!(rows.len(), 3721);
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert_eq!(origin[2], 0.0);
    // α is Lipschitz with constant 2/w(K) = 1 here; adjacent points sit 0.1 apart
    let k = bodies::parse_body(SQUARE).unwrap();
    let lip = 2.0 / convex::global_width(&k).unwrap().value;
    for i in 0..61 {
        for j in 0..61 {
            let r = rows[i * 61 + j];
            for (di, dj) in [(0, 1), (1, 0)] {
                if i + di < 61 && j + dj < 61 {
                    let s = rows[(i + di) * 61 + j + dj];
                    let dist = ((r[0] - s[0]).powi(2) + (r[1] - s[1]).powi(2)).sqrt();
                    assert!((r[2] - s[2]).abs() <= lip * dist + 1e-9);
                }
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["ratios", "--body", TRIANGLE, "--point", "11,11"],
        vec!["oracle-check", "--body", TRIANGLE, "--point", "11,12"],
        vec!["cheb-growth", "--body", TRIANGLE, "--point", "20,20", "--degree", "4"],
        vec!["experiment-conjecture", "--body", TRIANGLE, "--degree", "3", "--points", "40", "--dirs", "8"],
        vec!["grid", "--body", SQUARE, "--low", "-2,-2", "--high", "2,2", "--steps", "9"],
    ] {
        let a = call(&args);
        let b = call(&args);
        assert_eq!(a.0, EXIT_OK, "{}", a.2);
        assert_eq!(a, b);
    }
}

#[test]
fn levelset_at_one_round_trips() {
    let v = json_ok(&["levelset", "--body", TRIANGLE, "--lambda", "1"]);
    let desc = serde_json::to_string(&v["description"]).unwrap();
    let back = bodies::parse_body(&desc).unwrap();
    let k = bodies::parse_body(TRIANGLE).unwrap();
    for u in convex::sample_directions(2, 1000, 1) {
        let (a, b) = (k.support(&u).unwrap(), back.support(&u).unwrap());
        assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "{a} {b}");
    }
    assert_eq!(v["empty"], false);
}

#[test]
fn other_queries_run() {
    let tau = json_ok(&["tau", "--body", TRIANGLE, "--dir", "1,0"]);
    assert!((tau["tau"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    let w = json_ok(&["width", "--body", TRIANGLE]);
    assert!((w["value"].as_f64().unwrap() - 3.0 * 2f64.sqrt()).abs() < 1e-9);
    let h = json_ok(&["support", "--body", SQUARE, "--dir", "1,1"]);
    assert!((h["support"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let d = json_ok(&["hausdorff", "--body", SQUARE, "--other", r#"{"kind":"box","low":[-2,-1],"high":[1,1]}"#]);
    assert!((d["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    json_ok(&["cheb-leading", "--body", TRIANGLE, "--dir", "1,-1", "--degree", "3"]);
    json_ok(&["bernstein", "--body", TRIANGLE, "--point", "12,12", "--degree", "3"]);
    let e = json_ok(&["experiment-deltabound", "--body", TRIANGLE, "--steps", "5"]);
    assert!(e["rows"].as_array().unwrap().len() >= 5);
}

#[test]
fn input_errors_exit_with_code_two() {
    for args in [
        vec!["alpha", "--body", TRIANGLE, "--point", "1,2,3"],
        vec!["alpha", "--body", TRIANGLE, "--point", "a,b"],
        vec!["alpha", "--body", "{\"kind\":\"ball\",\"center\":[0,0],\"radius\":\"x\"}", "--point", "0,0"],
        vec!["alpha", "--body", "/nonexistent/body.json", "--point", "0,0"],
        vec!["tau", "--body", TRIANGLE, "--dir", "0,0"],
        vec!["levelset", "--body", TRIANGLE, "--lambda", "-1"],
        vec!["bernstein", "--body", TRIANGLE, "--point", "50,50", "--degree", "3"],
        vec!["frobnicate"],
        vec!["alpha", "--body", TRIANGLE],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(out.is_empty());
        let rec: Value = serde_json::from_str(err.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}: {err}"));
        assert_eq!(rec["exit_code"], EXIT_INPUT);
        assert!(rec["error"].is_string() && rec["message"].is_string());
    }
    let (_, _, err) = call(&["alpha", "--body", "{\"kind\":\"ball\",\n\"radius\":\"x\"}", "--point", "0,0"]);
    let rec: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["error"], "schema");
    assert!(rec["line"].as_u64().unwrap() >= 1);
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("alpha"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mgauge");
    let ok = Command::new(bin).args(["alpha", "--body", TRIANGLE, "--point", "12,12"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["alpha", "--body", TRIANGLE, "--point", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    let rec: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(rec["error"], "dimension_mismatch");
}
