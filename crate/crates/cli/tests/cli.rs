use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polypick")).args(args).output().expect("spawn polypick")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> (i32, Value, String) {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{cmd} {name}: {e}\n{text}"));
    (out.status.code().unwrap(), value, text)
}

fn schema(name: &str) -> jsonschema::Validator {
    let s: Value = serde_json::from_str(&fs::read_to_string(root().join("docs").join(name)).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, value: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(value).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}");
}

fn as_complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn solve_bidisc_fixture() {
    let (code, v, _) = run_fixture("solve", "bidisc_interior.json", &[]);
    assert_eq!(code, 0);
    let residuals = &v["report"]["residuals"];
    for r in residuals["interpolation"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() <= 1e-9);
    }
    assert!(residuals["sup_norm_sample"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(v["report"]["composed_blaschke"]["zeros"].as_array().unwrap().len(), 2);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for cmd in ["solve", "classify", "verify", "scale"] {
        let (_, _, a) = run_fixture(cmd, "tridisc_interior.json", &["--samples", "300"]);
        let (_, _, b) = run_fixture(cmd, "tridisc_interior.json", &["--samples", "300"]);
        assert_eq!(a, b, "{cmd}");
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let path = d.path().to_str().unwrap();
        run_fixture("sample-variety", "tridisc_interior.json", &["--csv-dir", path]);
        run_fixture("solve", "tridisc_interior.json", &["--csv-dir", path, "--samples", "64"]);
    }
    for f in ["variety.csv", "boundary.csv"] {
        let a = fs::read(dirs[0].path().join(f)).unwrap();
        assert_eq!(a, fs::read(dirs[1].path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn coincident_nodes_error_object() {
    for cmd in ["classify", "solve"] {
        let (code, v, _) = run_fixture(cmd, "coincident_nodes.json", &[]);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["code"], "NodesNotDistinct");
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn malformed_json_exits_3() {
    let (code, v, _) = run_fixture("solve", "malformed.json", &[]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "MalformedJson");

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("extra.json");
    fs::write(&p, r#"{"schema_version": 1, "n": 1, "nodes": [[[0,0]],[[0.1,0]],[[0.2,0]]], "targets": [[0,0],[0.1,0],[0.2,0]], "bogus": 1}"#).unwrap();
    let out = run(&["classify", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn shape_mismatch_is_numeric_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("shape.json");
    fs::write(&p, r#"{"schema_version": 1, "n": 2, "nodes": [[[0,0],[0,0]],[[0.1,0]],[[0.2,0],[0.3,0]]], "targets": [[0,0],[0.1,0],[0.2,0]]}"#)
        .unwrap();
    let out = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "DimensionMismatch");
}

#[test]
fn boundary_ambiguity_exits_2() {
    let (code, v, _) = run_fixture("classify", "boundary_square.json", &[]);
    assert_eq!(code, 2);
    assert_eq!(v["classification"]["boundary_case"], true);
    let (code, _, _) = run_fixture("solve", "boundary_square.json", &[]);
    assert_eq!(code, 2);
}

#[test]
fn not_extremal_reports_scale() {
    let (code, v, _) = run_fixture("solve", "not_extremal.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "NotExtremalDatum");
    assert!((v["error"]["details"]["scale"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    let (code, v, _) = run_fixture("scale", "not_extremal.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "not_extremal");
}

#[test]
fn routes_by_dimension() {
    let (_, v, _) = run_fixture("solve", "one_dimensional.json", &[]);
    assert_eq!(v["report"]["interpolant"]["kind"], "one_variable");
    assert_eq!(v["report"]["classification"]["dimension"], 1);
    let (_, v, _) = run_fixture("solve", "degenerate.json", &[]);
    assert_eq!(v["report"]["classification"]["degenerate"], true);
    let (code, v, _) = run_fixture("solve", "polydisc4_interior.json", &[]);
    assert_eq!(code, 0);
    assert!(v["report"]["classification"]["witness"]["Reduced"].is_object());
    for f in ["one_dimensional.json", "degenerate.json", "polydisc4_interior.json", "tridisc_interior.json"] {
        let (code, v, _) = run_fixture("verify", f, &["--samples", "500"]);
        assert_eq!(code, 0, "{f}");
        assert_eq!(v["verification"]["all_passed"], true);
    }
}

#[test]
fn generate_roundtrips_through_solve() {
    let params = r#"{"x":[0.3,-0.4],"y":[-0.5,-0.1],"alpha":[[0.2,0.3],[-0.6,0.1],[0.1,-0.5]],"t":[0.2,0.5,0.3],"omega":[[0.8,0.6],[0.0,-1.0]]}"#;
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("gen.json");
    let out = run(&["generate", "--n", "3", "--seed-params", params, "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let problem: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_valid(&schema("problem.schema.json"), &problem, "generated problem");

    let out = run(&["solve", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let g = &v["report"]["geodesic"];
    let input: Value = serde_json::from_str(params).unwrap();
    let close = |a: &Value, b: &Value| {
        let (a, b) = (as_complex(a), as_complex(b));
        (a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8
    };
    assert!(close(&g["x"], &input["x"]) && close(&g["y"], &input["y"]));
    for k in 0..3 {
        assert!(close(&g["alpha"][k], &input["alpha"][k]));
        assert!((g["t"][k].as_f64().unwrap() - input["t"][k].as_f64().unwrap()).abs() < 1e-8);
    }
    for k in 0..2 {
        assert!(close(&g["omega"][k], &input["omega"][k]));
    }

    let bad = run(&["generate", "--n", "2", "--seed-params", params]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = run(&["generate", "--n", "3", "--seed-params", "{not json"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn outputs_validate_against_schema() {
    let output = schema("output.schema.json");
    let problem = schema("problem.schema.json");
    let mut names: Vec<String> = fs::read_dir(root().join("fixtures"))
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    for name in &names {
        if name != "malformed.json" {
            let v: Value = serde_json::from_str(&fs::read_to_string(fixture(name)).unwrap()).unwrap();
            assert_valid(&problem, &v, name);
        }
        for cmd in ["solve", "classify", "scale", "verify", "sample-variety"] {
            let (_, v, _) = run_fixture(cmd, name, &["--samples", "100", "--format", "pretty"]);
            assert_valid(&output, &v, &format!("{cmd} {name}"));
        }
    }
}

#[test]
fn floats_carry_17_significant_digits() {
    let (_, _, text) = run_fixture("solve", "bidisc_interior.json", &[]);
    let mut count = 0;
    for token in text.split(|c: char| c == ',' || c == '[' || c == ']' || c == ':' || c == '{' || c == '}') {
        let t = token.trim();
        if t.contains('.') && !t.starts_with('"') {
            let mantissa = t.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.len(), 18, "{t}");
            count += 1;
        }
    }
    assert!(count > 50);
}

#[test]
fn csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let (code, v, _) = run_fixture("sample-variety", "bidisc_interior.json", &["--csv-dir", path, "--samples", "20"]);
    assert_eq!(code, 0);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-9);
    let mut r = csv::Reader::from_path(dir.path().join("variety.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["s", "lambda_re", "lambda_im", "residual"]);
    assert_eq!(r.records().count(), 10 * 20);

    run_fixture("solve", "bidisc_interior.json", &["--csv-dir", path, "--samples", "32"]);
    let mut r = csv::Reader::from_path(dir.path().join("boundary.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["coord_index", "theta", "modulus"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2 * 32);
    for row in rows {
        assert!(row[2].parse::<f64>().unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let (_, _, stdout) = run_fixture("scale", "tridisc_interior.json", &[]);
    let out = run(&["scale", fixture("tridisc_interior.json").to_str().unwrap(), "--out", p.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&p).unwrap(), stdout);
}

/// Byte-level comparison with checked-in outputs; `UPDATE_GOLDEN=1`
/// rewrites them.
#[test]
fn golden_outputs() {
    let cases = [
        ("scale", "not_extremal.json", "not_extremal.scale.json"),
        ("classify", "one_dimensional.json", "one_dimensional.classify.json"),
        ("solve", "bidisc_interior.json", "bidisc_interior.solve.json"),
        ("classify", "coincident_nodes.json", "coincident_nodes.classify.json"),
    ];
    let dir = root().join("fixtures/golden");
    for (cmd, input, golden) in cases {
        let (_, _, text) = run_fixture(cmd, input, &["--format", "pretty"]);
        let path = dir.join(golden);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&path, &text).unwrap();
            continue;
        }
        assert_eq!(text, fs::read_to_string(&path).unwrap(), "{golden}");
    }
}
