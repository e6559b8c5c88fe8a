//! End-to-end tests driving the compiled `pfle` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pfle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const WORKED_FIXTURE: &str = r#"{
  "points": 1,
  "dist": [[0]],
  "facilities": [0],
  "lease_durations": [5],
  "lease_costs": [[4]],
  "clients": [{ "point": 0, "penalty": 10, "arrival": 0 }]
}
"#;

#[test]
fn gen_solve_verify_pipeline_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let generated = pfle(&["gen", "--seed", "3", "--out", inst.to_str().unwrap()]);
    assert!(generated.status.success(), "{}", stderr(&generated));

    let solved = pfle(&["solve", inst.to_str().unwrap(), "--certify"]);
    assert!(solved.status.success(), "{}", stderr(&solved));
    let text = stdout(&solved);
    assert!(text.contains("ratio bounds: pass"), "{text}");

    let verified = pfle(&["verify", inst.to_str().unwrap()]);
    assert!(verified.status.success(), "{}", stderr(&verified));
    assert!(stdout(&verified).contains("result: pass"));
}

#[test]
fn missing_file_exits_two() {
    let out = pfle(&["solve", "/no/such/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/no/such/instance.json"), "{}", stderr(&out));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    assert!(pfle(&["gen", "--seed", "9", "--out", a.to_str().unwrap()])
        .status
        .success());
    assert!(pfle(&["gen", "--seed", "9", "--out", b.to_str().unwrap()])
        .status
        .success());
    assert!(pfle(&["gen", "--seed", "10", "--out", c.to_str().unwrap()])
        .status
        .success());
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    assert_ne!(bytes_a, std::fs::read(&c).unwrap());
}

#[test]
fn exact_reports_the_tight_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED_FIXTURE);
    let out = pfle(&["exact", inst.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("optimum: 4"), "{text}");
    assert!(text.contains("engine total: 12"), "{text}");
    assert!(text.contains("ratio to optimum: 3/1"), "{text}");
}

#[test]
fn solve_prune_keeps_only_the_used_copy() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED_FIXTURE);
    let out = pfle(&["solve", inst.to_str().unwrap(), "--prune"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("leases: 1, pruned"), "{text}");
    assert!(text.contains("total 4"), "{text}");
}

#[test]
fn exact_on_cheap_penalty_fixture_gives_ratio_one() {
    let fixture = WORKED_FIXTURE.replace("\"penalty\": 10", "\"penalty\": 3");
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "penalty.json", &fixture);
    let out = pfle(&["exact", inst.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("optimum: 3"), "{text}");
    assert!(text.contains("engine total: 3"), "{text}");
    assert!(text.contains("ratio to optimum: 1/1"), "{text}");
}

#[test]
fn exact_with_no_clients_reports_zero_optimum() {
    let fixture = WORKED_FIXTURE.replace(
        "\"clients\": [{ \"point\": 0, \"penalty\": 10, \"arrival\": 0 }]",
        "\"clients\": []",
    );
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "empty.json", &fixture);
    let out = pfle(&["exact", inst.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("optimum: 0"), "{text}");
    assert!(text.contains("ratio to optimum: -"), "{text}");
}

#[test]
fn exact_too_large_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED_FIXTURE);
    let out = pfle(&["exact", inst.to_str().unwrap(), "--max-candidates", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("too large"), "{}", stderr(&out));
}

#[test]
fn asymmetric_matrix_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "bad.json",
        r#"{
          "points": 2,
          "dist": [[0, 3], [4, 0]],
          "facilities": [0],
          "lease_durations": [1],
          "lease_costs": [[1]],
          "clients": []
        }"#,
    );
    let out = pfle(&["solve", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dist[0][1]"), "{}", stderr(&out));
}

#[test]
fn float_penalty_exits_two() {
    let fixture = WORKED_FIXTURE.replace("\"penalty\": 10", "\"penalty\": 2.5");
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "float.json", &fixture);
    let out = pfle(&["solve", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not exact"), "{}", stderr(&out));
}

#[test]
fn solve_json_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED_FIXTURE);
    let out = pfle(&[
        "solve",
        inst.to_str().unwrap(),
        "--certify",
        "--emit-dual",
        "--json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["cost"]["total"], 12);
    assert_eq!(value["dual_objective"], 4);
    assert_eq!(value["ratio_to_dual"], "3/1");
    assert_eq!(value["events"], 3);
    assert_eq!(value["leases"].as_array().unwrap().len(), 3);
    assert_eq!(value["dual"]["alpha"][0], 4);
    assert!(value["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn bench_empty_matrix_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "matrix.json", "[]\n");
    let out_dir = dir.path().join("out");
    let out = pfle(&[
        "bench",
        matrix.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("seed,points,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn bench_single_row_matrix_writes_header_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(
        dir.path(),
        "matrix.json",
        r#"[{ "seeds": [4, 4], "points": 5, "facilities": 2, "clients": 4,
             "lease_types": 2, "horizon": 2, "cost_scale": 5, "penalty_scale": 9 }]"#,
    );
    let out_dir = dir.path().join("out");
    let out = pfle(&[
        "bench",
        matrix.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("4,5,2,4,2,2,false,"), "{row}");
    let summary = stdout(&out);
    assert!(summary.contains("rows: 1"), "{summary}");
    assert!(summary.contains("max ratio to dual: "), "{summary}");
}

#[test]
fn gen_without_out_prints_canonical_instance() {
    let out = pfle(&["gen", "--seed", "2", "--points", "4", "--facilities", "1", "--clients", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["points"], 4);
    assert!(text.ends_with('\n'));
}
