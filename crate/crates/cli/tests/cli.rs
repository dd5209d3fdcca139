use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toric-bridge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp(name: &str, contents: &[u8]) -> PathBuf {
    let path = std::env::temp_dir().join(format!("cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn example(args: &[&str]) -> Vec<u8> {
    let mut all = vec!["example"];
    all.extend_from_slice(args);
    let out = run(&all, None);
    assert!(out.status.success());
    out.stdout
}

#[test]
fn dualize_square_is_reflexive() {
    let out = run(&["dualize", "-"], Some(r#"{"polytope":[[1,0],[0,1],[-1,0],[0,-1]]}"#));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["reflexive"], true);
    assert_eq!(v["result"]["dual_vertices"].as_array().unwrap().len(), 4);
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn dualize_reports_a_fractional_witness() {
    let out = run(&["dualize", "-"], Some(r#"{"polytope":[[2,0],[-2,0],[0,1],[0,-1]]}"#));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["reflexive"], false);
    assert_eq!(v["result"]["witness"], serde_json::json!(["-1/2", -1]));
}

#[test]
fn dualize_simplex() {
    let v = json(&run(&["dualize", "-"], Some(r#"{"polytope":[[1,0],[0,1],[-1,-1]]}"#)));
    assert_eq!(v["result"]["reflexive"], true);
    assert_eq!(v["result"]["dual_vertices"], serde_json::json!([[-1, -1], [-1, 2], [2, -1]]));
}

#[test]
fn input_errors_exit_one() {
    for bad in ["{", r#"{"polytope":[[1.5,0]]}"#, r#"{"polytope":[[1,0],[2,0]],"extra":1}"#, r#"{"polytope":[[1,0],[2,0],[1,1]]}"#] {
        let out = run(&["dualize", "-"], Some(bad));
        assert_eq!(out.status.code(), Some(1), "{bad}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "input");
    }
    assert_eq!(run(&["dualize", "/nonexistent/file.json"], None).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}

#[test]
fn pair_out_of_range_exits_one() {
    let path = temp("pp33-range.json", &example(&["product-projective", "--n", "3", "--t", "3"]));
    let out = run(&["bridge", path.to_str().unwrap(), "--pair", "1", "9"], None);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn strict_mode_turns_warnings_into_exit_two() {
    let path = temp("two.json", &example(&["two-segment"]));
    let p = path.to_str().unwrap();
    let lenient = run(&["verify", p, "--samples", "10"], None);
    let strict = run(&["verify", p, "--samples", "10", "--strict"], None);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(lenient.status.code(), Some(0));
    assert!(!json(&lenient)["warnings"].as_array().unwrap().is_empty());
    assert_eq!(strict.status.code(), Some(2));
    assert_eq!(lenient.stdout, strict.stdout);
}

#[test]
fn examples_round_trip_through_every_command() {
    for name in ["two-segment", "square", "p3-split", "p4-three-parts"] {
        let bytes = example(&[name]);
        let path = temp(&format!("{name}.json"), &bytes);
        let p = path.to_str().unwrap();
        for cmd in ["nefdual", "cone", "decompose", "bridge", "pipeline"] {
            let out = run(&[cmd, p], None);
            assert_eq!(out.status.code(), Some(0), "{name} {cmd}: {}", String::from_utf8_lossy(&out.stderr));
        }
        // the instance reads back through stdin unchanged
        let again = run(&["cone", "-"], Some(std::str::from_utf8(&bytes).unwrap()));
        assert_eq!(json(&again)["result"], json(&run(&["cone", p], None))["result"]);
        std::fs::remove_file(&path).unwrap();
    }
}

#[test]
fn pipeline_reports_missing_double_mirror() {
    let path = temp("two-pipe.json", &example(&["two-segment"]));
    let v = json(&run(&["pipeline", path.to_str().unwrap()], None));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["result"]["decomposition_count"], 1);
    assert!(v["result"]["notice"].as_str().unwrap().contains("only one decomposition"));
    assert!(v["result"].get("evidence").is_none());
}

#[test]
fn pipeline_on_product_projective() {
    let path = temp("pp33-pipe.json", &example(&["product-projective", "--n", "3", "--t", "3"]));
    let v = json(&run(&["pipeline", path.to_str().unwrap(), "--pair", "1", "3", "--samples", "20"], None));
    std::fs::remove_file(&path).unwrap();
    let ev = &v["result"]["evidence"];
    assert_eq!(ev["birational_evidence"], true);
    assert_eq!(ev["equation_failures"], 0);
    assert_eq!(v["result"]["pair"], serde_json::json!([1, 3]));
}

#[test]
fn output_is_deterministic_sorted_and_mirrored_to_file() {
    let path = temp("pp33-det.json", &example(&["product-projective", "--n", "3", "--t", "3"]));
    let p = path.to_str().unwrap();
    let target = std::env::temp_dir().join(format!("cli-test-{}-out.json", std::process::id()));
    let a = run(&["verify", p, "--samples", "30", "--seed", "4"], None);
    let b = run(&["verify", p, "--samples", "30", "--seed", "4", "--output", target.to_str().unwrap()], None);
    let written = std::fs::read(&target).unwrap();
    let pretty = run(&["verify", p, "--samples", "30", "--seed", "4", "--pretty"], None);
    std::fs::remove_file(&path).unwrap();
    std::fs::remove_file(&target).unwrap();
    assert_eq!(a.stdout, written);
    assert!(b.stdout.is_empty());
    assert_eq!(json(&pretty), json(&a));
    // top-level keys appear in sorted order in the raw text
    let text = String::from_utf8(a.stdout).unwrap();
    let at = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(at("command") < at("input_digest") && at("input_digest") < at("result") && at("result") < at("warnings"));
    let result = &text[at("result")..];
    let key = |k: &str| result.find(&format!("\"{k}\"")).unwrap();
    assert!(key("fiber_histogram_e") < key("prime") && key("prime") < key("samples"));
}

#[test]
fn rational_coefficients_are_rejected_by_verify() {
    let bytes = example(&["square"]);
    let mut inst: Value = serde_json::from_slice(&bytes).unwrap();
    inst["coefficients"] = serde_json::json!({"field": "rational", "seed": 1});
    let text = inst.to_string();
    assert_eq!(run(&["bridge", "-"], Some(&text)).status.code(), Some(0));
    assert_eq!(run(&["verify", "-"], Some(&text)).status.code(), Some(1));
}
