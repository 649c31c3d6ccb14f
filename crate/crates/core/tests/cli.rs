use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metastable"))
        .args(args)
        .env_remove("METASTABLE_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates the schema: {errors:?}");
    v
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn octahedron_at_n4() {
    let v = json(&["landscape", "--n", "4", "--gamma", "0", "--full"]);
    assert_eq!(v["minima"].as_array().unwrap().len(), 6);
    assert_eq!(v["saddles"].as_array().unwrap().len(), 12);
    assert!(v["degrees"].as_array().unwrap().iter().all(|d| d == 4));
    let dot = String::from_utf8(run(&["landscape", "--n", "4", "--full", "--format", "dot"]).stdout).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 12);
}

#[test]
fn orbit_classes_at_n8_after_continuation() {
    let v = json(&["landscape", "--n", "8", "--gamma", "0.05", "--orbits"]);
    let fams: Vec<&str> = v["families"].as_array().unwrap().iter().map(|f| f["family"].as_str().unwrap()).collect();
    assert_eq!(fams, ["B0", "B1", "C1"]);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn sizes_divisible_by_three_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l.json");
    let out = out.to_str().unwrap();
    for cmd in ["landscape", "hierarchy", "rates", "gap"] {
        assert_eq!(code(&[cmd, "--n", "9", "--out", out]), 2, "{cmd}");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    assert_eq!(code(&["rates", "--eps", "0"]), 2);
    assert_eq!(code(&["landscape", "--format", "csv"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn numeric_failures_exit_3_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    // B2 at n = 14 loses its index near gamma = 0.014.
    assert_eq!(code(&["rates", "--n", "14", "--gamma", "0.02", "--out", out.to_str().unwrap()]), 3);
    assert!(!out.exists());
}

#[test]
fn hierarchy_orders() {
    let v = json(&["hierarchy", "--n", "8"]);
    let a: Vec<&str> = v["a"]["blocks"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
    assert_eq!(a, ["A2", "A'4", "A4", "A6", "A8"]);
    assert_eq!(v["bk"]["theta_exact"], "8/19");
    let v = json(&["hierarchy", "--n", "16"]);
    let a: Vec<&str> = v["a"]["blocks"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
    let a4 = a.iter().position(|b| *b == "A4").unwrap();
    for primed in ["A'4", "A'6", "A'8"] {
        assert!(a.iter().position(|b| *b == primed).unwrap() < a4);
    }
    let dot = String::from_utf8(run(&["hierarchy", "--format", "dot"]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn rates_carry_the_symmetry_factor() {
    let v = json(&["rates", "--n", "14", "--eps", "0.05"]);
    let rows = v["rates"].as_array().unwrap();
    let exact: Vec<&str> = rows.iter().map(|r| r["symmetry_exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["1/8", "1/9"]);
    let csv = String::from_utf8(run(&["rates", "--n", "14", "--format", "csv"]).stdout).unwrap();
    assert!(csv.lines().next().unwrap().contains("symmetry_factor"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn gap_matches_the_closed_form_and_ignores_qy() {
    // M = 4: D = 7, det x = 2^7, det z = -(20/7)^2 (5/7)^4, lambda_- = -5/14, barrier 3/7.
    let eps: f64 = 0.05;
    let det_z = (20.0f64 / 7.0).powi(2) * (5.0f64 / 7.0).powi(4);
    let qx = (5.0 / 14.0) / (2.0 * PI) * (128.0 / det_z).sqrt() * (-3.0 / 7.0 / eps).exp();
    let expected = 4.0 * (PI / 8.0).sin().powi(2) * qx;
    let a = json(&["gap", "--n", "8", "--eps", "0.05"])["report"]["lambda2"].as_f64().unwrap();
    let b = json(&["gap", "--n", "8", "--eps", "0.05", "--qy", "1e4"])["report"]["lambda2"].as_f64().unwrap();
    assert!((a - expected).abs() <= 1e-12 * expected, "{a} vs {expected}");
    assert!((a - b).abs() <= 1e-12 * a);
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sde_output_conserves_mass() {
    let out = run(&["simulate", "sde", "--n", "8", "--eps", "0.05", "--steps", "20000", "--stride", "100"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("t,i1,i2,i3,i4,i5,i6,i7,i8\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 201);
    for row in r {
        let s: f64 = row[1..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        assert!(s.abs() < 1e-10);
    }
    let v = json(&["simulate", "sde", "--steps", "50", "--stride", "10", "--format", "json"]);
    assert_eq!(v["run"]["trajectory"].as_array().unwrap().len(), 6);
}

#[test]
fn jump_trace_coarsens_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["simulate", "jump", "--n", "16", "--gamma", "0.09", "--eps", "0.05", "--events", "3000"];
    let mut first: Vec<&str> = args.to_vec();
    first.extend(["--seed", "11", "--out", a.to_str().unwrap()]);
    assert!(run(&first).status.success());
    let second = Command::new(env!("CARGO_BIN_EXE_metastable"))
        .args(args)
        .args(["--out", b.to_str().unwrap()])
        .env("METASTABLE_SEED", "11")
        .status()
        .unwrap();
    assert!(second.success());
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with("t,p,label\n"));
    let ps: Vec<usize> = rows(&ta).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ps[0], 16);
    assert!(*ps.last().unwrap() < 16);

    let log = String::from_utf8(run(&["simulate", "jump", "--n", "16", "--gamma", "0.09", "--events", "200", "--event-log"]).stdout).unwrap();
    assert!(log.starts_with("t_wait,site_i,site_j,type,delta_p\n"));
    for r in rows(&log) {
        assert!(["-4", "-2", "0", "2", "4"].contains(&r[4].as_str()));
    }
    json(&["simulate", "jump", "--gamma", "0.09", "--events", "20", "--format", "json"]);
}

#[test]
fn verify_passes_and_reports_by_name() {
    let out = run(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().any(|l| l.starts_with("PASS continuation_n8")));
    let v = json(&["verify", "--format", "json"]);
    assert_eq!(v["passed"], true);
}
