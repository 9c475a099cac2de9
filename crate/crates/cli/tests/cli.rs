use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn truncmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_truncmat")).args(args).output().unwrap()
}

fn truncmat_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_truncmat")).env("RAYON_NUM_THREADS", threads).args(args).output().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(doc: &Value) {
    let schema: Value = serde_json::from_str(include_str!("../schema/output.json")).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("schema violations: {msgs:?}");
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn sample_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = truncmat_threads(
            threads,
            &[
                "--command", "sample", "--n", "2", "--nu", "1", "--m", "7", "--samples", "10000", "--seed", "42",
                "--format", "csv", "--out", out.to_str().unwrap(),
            ],
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(&out).unwrap(), std::fs::read(out.with_extension("json")).unwrap())
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(b, c);

    let text = String::from_utf8(a.0).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("y1,y2"));
    let mut rows = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)) && v[0] <= v[1]);
        rows += 1;
    }
    assert_eq!(rows, 10000);

    let side: Value = serde_json::from_slice(&a.1).unwrap();
    assert_valid(&side);
    let h = &side["results"]["histogram"];
    let edges: Vec<f64> = h["edges"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let mass: f64 = h["density"]
        .as_array()
        .unwrap()
        .iter()
        .zip(edges.windows(2))
        .map(|(d, e)| d.as_f64().unwrap() * (e[1] - e[0]))
        .sum();
    assert!((mass - 1.0).abs() < 1e-12);
    assert_eq!(side["seed"], 42);
}

#[test]
fn kernel_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = truncmat(&[
        "--command", "kernel", "--n", "4", "--r", "2", "--nu", "1,0", "--m", "11,7", "--grid", "0.1:0.9:5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&out);
    assert_valid(&doc);
    let r = &doc["results"];
    assert_eq!(r["agree"], true);
    assert!(r["max_discrepancy"].as_f64().unwrap() < 1e-6);
    assert!(r["trace_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["diagonal_nonnegative"], true);
    assert_eq!(r["rows"].as_array().unwrap().len(), 25);
    assert_eq!(r["columns"][4], "abs_diff");
}

#[test]
fn density_reports_exact_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = truncmat(&[
        "--command", "density", "--n", "1", "--nu", "0", "--m", "3", "--grid", "0.1:0.9:9", "--format", "csv",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&out.with_extension("json"));
    assert_valid(&doc);
    assert_eq!(doc["results"]["normalization"], "1/2");
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    // n = 1: one-point density 2(1 - x), weight 1 - x
    assert!((row[1] - 1.8).abs() < 1e-12 && (row[2] - 0.9).abs() < 1e-12);
}

#[test]
fn hard_edge_matches_bessel_and_finite_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = truncmat(&[
        "--command", "hard-edge", "--n", "8", "--nu", "0", "--m", "24", "--grid", "0.5:5:3",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&out);
    assert_valid(&doc);
    let r = &doc["results"];
    assert!(r["max_bessel_deviation"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["scaling_constant"], 128.0);
    assert!(r["max_finite_deviation"].as_f64().unwrap() < 0.05);

    let out = dir.path().join("q.json");
    let o = truncmat(&[
        "--command", "hard-edge", "--nu", "0,0", "--j", "2", "--mu", "1", "--grid", "0.5:5:2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let doc = read_json(&out);
    assert_valid(&doc);
    assert_eq!(doc["results"]["rt_degree"], 1);
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = truncmat(&["--command", "verify", "--seed", "7", "--out", out.to_str().unwrap()]);
    let doc = read_json(&out);
    assert_valid(&doc);
    assert_eq!(code(&o), 0, "{doc}");
    let checks = doc["results"]["checks"].as_array().unwrap();
    let bi = checks.iter().find(|c| c["name"] == "biorthogonality").unwrap();
    assert_eq!(bi["statistic"], 0.0);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn corrupted_constant_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = truncmat(&[
        "--command", "verify", "--seed", "7", "--samples", "100000", "--corrupt-cnp", "1.5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let doc = read_json(&out);
    assert_valid(&doc);
    let checks = doc["results"]["checks"].as_array().unwrap();
    let g = checks.iter().find(|c| c["name"] == "group_integral").unwrap();
    assert_eq!(g["pass"], false);
    assert!(g["statistic"].as_f64().unwrap() > 3.0);
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let out = out.to_str().unwrap();
    let bad_spec = truncmat(&["--command", "kernel", "--n", "3", "--nu", "0", "--m", "4", "--grid", "0.1:0.9:3", "--out", out]);
    assert_eq!(code(&bad_spec), 2);
    let no_seed = truncmat(&["--command", "sample", "--n", "1", "--nu", "0", "--m", "3", "--out", out]);
    assert_eq!(code(&no_seed), 2);
    let bad_grid = truncmat(&["--command", "kernel", "--n", "1", "--nu", "0", "--m", "3", "--grid", "0.1:2:3", "--out", out]);
    assert_eq!(code(&bad_grid), 2);
    let bad_flag = truncmat(&["--command", "teleport", "--out", out]);
    assert_eq!(code(&bad_flag), 2);
    let unreachable = truncmat(&["--command", "hard-edge", "--nu", "0", "--grid", "0.5:1e6:2", "--out", out]);
    assert_eq!(code(&unreachable), 3);
    assert!(!Path::new(out).exists());
}
