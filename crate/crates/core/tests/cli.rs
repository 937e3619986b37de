use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn hbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbl")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str], out: &Path) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["-o", out.to_str().unwrap()]);
    let o = hbl(&all);
    let code = o.status.code().unwrap();
    let v = std::fs::read(out).map(|b| serde_json::from_slice(&b).unwrap()).unwrap_or(Value::Null);
    (code, v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn polytope_reports_vertices_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("young.json");
    let young = config("young.json");
    let (code, v) = run_json(&["polytope", "-c", young.to_str().unwrap()], &out);
    assert_eq!(code, 0);
    let verts: Vec<Vec<String>> = serde_json::from_value(v["vertices"].clone()).unwrap();
    assert_eq!(verts, vec![vec!["0", "1", "1"], vec!["1", "0", "1"], vec!["1", "1", "0"]]);
    assert!(v["inequalities"].as_array().unwrap().iter().all(|r| r.get("subspace").is_some()));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert!(v.get("seed").is_some());

    let lw = config("loomis_whitney_2d.json");
    let (code, v) = run_json(&["polytope", "-c", lw.to_str().unwrap()], &out);
    assert_eq!(code, 0);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let young = config("young.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run_json(&["certify", "-c", young.to_str().unwrap()], &a);
    run_json(&["certify", "-c", young.to_str().unwrap()], &b);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn parse_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"d": 2, "maps": [[[0, 1]], [[1, "x"]], [[1, 0]]]}"#);
    let o = hbl(&["polytope", "-c", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("maps[1]"));

    let neg = write(dir.path(), "neg.json", r#"{"d": 2, "maps": [[[0, 1]], [[1, -1]], [[1, 0]]], "m": [2, -1, 0]}"#);
    let o = hbl(&["certify", "-c", neg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m[1]"));
}

#[test]
fn empty_polytope_exits_2() {
    // A single map to ℝ¹ from ℝ²: s·1 = 2 forces s = 2 but V = ker L needs 0 ≥ 1.
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.json", r#"{"d": 2, "maps": [[[1, 0]]]}"#);
    let o = hbl(&["polytope", "-c", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn certify_young() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let young = config("young.json");
    let (code, v) = run_json(&["certify", "-c", young.to_str().unwrap()], &out);
    assert_eq!(code, 0);
    assert_eq!(v["primal_value"], "1");
    assert_eq!(v["dual_value"], "1");
    let exps: Vec<&str> = v["edges"].as_array().unwrap().iter().map(|e| e["exponent"].as_str().unwrap()).collect();
    let mut sorted = exps.clone();
    sorted.sort();
    assert_eq!(sorted, vec!["0", "1"]);
    assert!(v["margins"].as_array().unwrap().iter().all(|m| m.as_f64().unwrap() >= 0.0));
    assert!(v["trace_length"].as_u64().is_some());
}

#[test]
fn certify_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let young = config("young.json");
    let o = hbl(&["certify", "-c", young.to_str().unwrap(), "--sweep", "m=0..12", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config_hash="));
    assert!(lines[1].starts_with("m,primal_value"));
    assert_eq!(lines.len(), 2 + 13);
    assert!(lines[2 + 12].starts_with("24 12 0,12,"));
}

#[test]
fn check_b_in_and_out_of_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let young = config("young.json");
    let mono = config("young_monomial.json");
    let (code, v) = run_json(
        &["check-b", "-c", young.to_str().unwrap(), "-b", mono.to_str().unwrap(), "--samples", "2000", "--seed", "7"],
        &out,
    );
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["monomial_in_polytope"], true);
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["pass"], true, "{r}");
    }

    let cubic = config("cubic_monomial.json");
    let (code, v) = run_json(
        &["check-b", "-c", young.to_str().unwrap(), "-b", cubic.to_str().unwrap(), "--checks", "condition2"],
        &out,
    );
    assert_eq!(code, 4);
    let r = &v["reports"][0];
    assert_eq!(r["pass"], false);
    assert!(r["witness"]["lambda"].is_array());
}

#[test]
fn check_b_delta3_on_young_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let young = config("young.json");
    let fam = config("young_family.json");
    let (code, v) = run_json(
        &["check-b", "-c", young.to_str().unwrap(), "-b", fam.to_str().unwrap(), "--checks", "delta3", "--samples", "2000"],
        &out,
    );
    assert_eq!(code, 0);
    assert_eq!(v["reports"][0]["condition"], "delta3_nonneg");
}

#[test]
fn extremize_with_zero_iterations_echoes_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let two = config("two_monomial.json");
    let o = hbl(&[
        "extremize",
        "-b",
        two.to_str().unwrap(),
        "--grid",
        "L=16,N=256",
        "--sigmas",
        "0.5,2,5",
        "--iterations",
        "0",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["final_value"], v["gaussian_baseline"]["value"]);
    assert_eq!(v["ascent"]["values"].as_array().unwrap().len(), 1);
    let triple = hbl::lab::Triple::load(&out.join("triple")).unwrap();
    assert_eq!(triple.grid().n, 256);
    let csv = std::fs::read_to_string(out.join("flatness.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 125);
}

#[test]
fn extremize_rejects_bad_grid() {
    let two = config("two_monomial.json");
    let o = hbl(&["extremize", "-b", two.to_str().unwrap(), "--grid", "L=16,M=3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--grid"));
}
