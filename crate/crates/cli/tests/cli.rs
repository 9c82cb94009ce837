use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cullenrec"))
        .args(args)
        .env_remove("PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn root_prints_tribonacci_constant() {
    let o = run(&["root", "--k", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1.83928675"));
}

#[test]
fn root_json_has_enclosure_and_bracket() {
    let o = run(&["--json", "root", "--k", "2", "--precision-bits", "128"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enclosure"]["bits"], 128);
    assert!(v["enclosure"]["lo"]
        .as_str()
        .unwrap()
        .starts_with("1.618033988"));
    assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
}

#[test]
fn fracmin_brute_finds_65() {
    let o = run(&["fracmin", "--max", "100", "--mode", "brute"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("argmin = 65"));
}

#[test]
fn cullen_digit_count() {
    let o = run(&["cullen", "--m", "139948", "--s", "151", "--digits-only"]);
    assert_eq!(stdout(&o).trim(), "304949");
}

#[test]
fn cullen_value_and_rejection() {
    assert_eq!(stdout(&run(&["cullen", "--m", "5"])).trim(), "161");
    assert_eq!(run(&["cullen", "--m", "0"]).status.code(), Some(1));
}

#[test]
fn bounds_default_matches_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["bounds", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["final_bounds"]["k_final"], 158);
    assert_eq!(v["matches_paper"], true);
    assert_eq!(v["paper_targets"]["m"], "9.5e23");
}

#[test]
fn bounds_with_3_6_factor_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"include_3_6_factor": true}"#).unwrap();
    let o = run(&["--json", "--config", cfg.to_str().unwrap(), "bounds"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trace"]["iterations"][0]["k_out"], 277);
    assert!(!v["flags"].as_array().unwrap().is_empty());
}

#[test]
fn bounds_at_64_bits_is_precision_failure() {
    let o = run(&["bounds", "--precision-bits", "64"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cullenrec"))
        .args(["bounds"])
        .env("PRECISION_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&["--json", "bounds"]);
    let b = run(&["--json", "bounds"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reduce_writes_trace_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.json");
    let o = run(&[
        "reduce",
        "--k-start",
        "auto",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let it = &v["iterations"][0];
    for key in ["k_in", "m_bound", "s", "frac_min", "k_out"] {
        assert!(!it[key].is_null(), "missing {key}");
    }
    assert!(it["frac_min"]["lo"].is_string() && it["frac_min"]["hi"].is_string());
    assert_eq!(v["converged"], true);
    assert_eq!(run(&["reduce", "--k-start", "ten"]).status.code(), Some(1));
}

#[test]
fn searches_emit_json_lines() {
    let o = run(&["search", "cullen", "--kmax", "10", "--nmax", "200"]);
    assert_eq!(stdout(&o), "{\"n\":4,\"k\":2,\"m\":1,\"witness\":\"3\"}\n");
    let o = run(&["search", "pow2p1", "--kmax", "10", "--nmax", "200"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn general_search_with_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"order": 2, "coefficients": ["1", "1"], "initial": ["4", "2"]}"#,
    )
    .unwrap();
    let o = run(&[
        "search",
        "general",
        "--spec",
        spec.to_str().unwrap(),
        "--T",
        "-4",
        "--x",
        "2..50",
        "--nmax",
        "20",
        "--mmax",
        "10",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("{\"n\":4,\"m\":2,\"x\":\"3\",\"witness\":\"14\"}"));
    assert!(out.contains("{\"n\":8,\"m\":2,\"x\":\"7\",\"witness\":\"94\"}"));
}

#[test]
fn classify_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"order": 2, "coefficients": [-6, 5], "initial": [0, 1]}"#,
    )
    .unwrap();
    let o = run(&["--json", "classify", "--spec", spec.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variant"], "CaseII");
    assert_eq!(v["dominant_simple"], true);
}

#[test]
fn height_of_golden_ratio() {
    let o = run(&["height", "--poly", "x^2 - x - 1"]);
    assert!(stdout(&o).contains("2.40605912529"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["root"]).status.code(), Some(1));
    assert_eq!(run(&["root", "--k", "1"]).status.code(), Some(1));
    assert_eq!(
        run(&["fracmin", "--max", "1e8", "--mode", "brute"])
            .status
            .code(),
        Some(1)
    );
}
