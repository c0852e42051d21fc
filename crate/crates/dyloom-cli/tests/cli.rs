//! End-to-end tests of the `dyloom` binary: output shapes, determinism,
//! caching, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyloom"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn multiply_both_methods_agree() {
    let out = run(&["multiply", "--sigma", "1", "--tau", "1", "--method", "both"]);
    let text = stdout_of(&out);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"terms": [
            {"degree": 2, "perm": [1, 2], "coeff": "2"},
            {"degree": 2, "perm": [2, 1], "coeff": "-1"},
        ]})
    );
}

#[test]
fn multiply_accepts_cycle_notation() {
    let one_line = stdout_of(&run(&["multiply", "--sigma", "2 1", "--tau", "1"]));
    let cycles = stdout_of(&run(&["multiply", "--sigma", "(12)", "--tau", "1"]));
    assert_eq!(one_line, cycles);
}

#[test]
fn count_looms_value() {
    let out = stdout_of(&run(&["count", "looms", "--n", "2", "--m", "2"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "n": 2, "m": 2, "kind": "looms", "method": "recursion", "value": "129"
        })
    );
    // All methods return the same value.
    for method in ["recursion-col", "closed", "enumeration"] {
        let o = stdout_of(&run(&["count", "looms", "--n", "2", "--m", "2", "--method", method]));
        let v: serde_json::Value = serde_json::from_str(o.trim()).unwrap();
        assert_eq!(v["value"], "129", "method {method}");
    }
}

#[test]
fn enumerate_degenerate_has_one_record() {
    let out = stdout_of(&run(&["enumerate", "mosaics", "--n", "0", "--m", "3"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["n"], 0);
    assert_eq!(v["m"], 3);
}

#[test]
fn enumerate_matches_count() {
    let out = stdout_of(&run(&["enumerate", "looms", "--n", "1", "--m", "2"]));
    assert_eq!(out.lines().count(), 17);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["multiply", "--sigma", "2 1 3", "--tau", "2 1"],
        vec!["enumerate", "looms", "--n", "2", "--m", "2"],
        vec!["constants", "--n", "1", "--m", "2"],
        vec!["conjectures", "--max-n", "2", "--max-m", "2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "args {args:?}");
    }
    // Thread cap must not change the bytes.
    let free = run(&["multiply", "--sigma", "2 1 3", "--tau", "2 1"]);
    let capped = run(&[
        "--threads", "1", "multiply", "--sigma", "2 1 3", "--tau", "2 1",
    ]);
    assert_eq!(free.stdout, capped.stdout);
}

#[test]
fn cache_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "enumerate", "looms", "--n", "1", "--m", "1"];
    let first = stdout_of(&run(&args));
    assert_eq!(first.lines().count(), 5);
    let data_path = Path::new(cache).join("looms-1-1-v1.jsonl");
    assert!(data_path.exists());
    assert!(Path::new(cache).join("looms-1-1-v1.sha256").exists());
    // Cached rerun is byte-identical.
    let second = stdout_of(&run(&args));
    assert_eq!(first, second);
    // A corrupt cache is rejected with exit code 3, not regenerated.
    let mut bytes = std::fs::read(&data_path).unwrap();
    bytes.extend_from_slice(b"garbage\n");
    std::fs::write(&data_path, &bytes).unwrap();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(std::fs::read(&data_path).unwrap(), bytes, "not regenerated");
}

#[test]
fn env_var_sets_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("DYLOOM_CACHE", dir.path())
        .args(["enumerate", "mosaics", "--n", "1", "--m", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("mosaics-1-1-v1.jsonl").exists());
}

#[test]
fn constants_csv_header_and_rows() {
    let out = stdout_of(&run(&[
        "constants", "--n", "1", "--m", "1", "--format", "csv",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,m,sigma,tau,pi,P,N,c");
    assert!(lines.contains(&"1,1,1,1,1 2,2,0,2"));
    assert!(lines.contains(&"1,1,1,1,2 1,1,2,-1"));
}

#[test]
fn realize_emits_rational_terms() {
    let out = stdout_of(&run(&["realize", "--sigma", "1"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v, serde_json::json!({"e": 0, "f": 0, "h": 2, "coeff": "1/4"}));
    // The same value through --element with an explicit coefficient.
    let elem = r#"{"terms":[{"perm":[1],"coeff":"1"}]}"#;
    let out2 = stdout_of(&run(&["realize", "--element", elem]));
    assert_eq!(out, out2);
}

#[test]
fn bpd_from_perm_and_from_loom() {
    let out = stdout_of(&run(&["bpd", "--perm", "1 2 4 3"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["perm"], serde_json::json!([1, 2, 4, 3]));
    // Round-trip a loom through a file.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loom.json");
    let looms = stdout_of(&run(&["enumerate", "looms", "--n", "1", "--m", "1"]));
    std::fs::write(&path, looms.lines().next().unwrap()).unwrap();
    let out = run(&["bpd", "--from-loom", path.to_str().unwrap()]);
    let text = stdout_of(&out);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["size"], 2);
}

#[test]
fn verify_passes_on_small_range() {
    let out = run(&["verify", "--max-total", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.contains("\"status\":\"pass\"")));
}

#[test]
fn conjectures_report_known_non_member() {
    let out = stdout_of(&run(&["conjectures", "--max-n", "1", "--max-m", "3"]));
    let avoidance_1_3 = out
        .lines()
        .find(|l| l.contains("pattern-avoidance-image") && l.contains("(1,3)"))
        .expect("report for (1,3)");
    assert!(avoidance_1_3.contains("[2, 1, 4, 3]"));
    assert!(!out.contains("\"FAIL\""));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["count", "looms", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["multiply", "--sigma", "nope", "--tau", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["realize", "--sigma", "1", "--element", "{}"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["count", "looms", "--n", "1", "--m", "1", "--method", "closed-stirling"])
            .status
            .code(),
        Some(2)
    );
}
