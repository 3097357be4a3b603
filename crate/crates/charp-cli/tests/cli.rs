//! End-to-end tests of the `charp` binary: exit statuses, diagnostics, and
//! byte-determinism of the canonical JSON output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn charp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charp"))
        .args(args)
        .env_remove("CHARP_BUDGET")
        .output()
        .expect("spawn charp")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct TempScript(PathBuf);

impl TempScript {
    fn new(name: &str, text: &str) -> TempScript {
        let path =
            std::env::temp_dir().join(format!("charp-cli-{name}-{}.charp", std::process::id()));
        std::fs::write(&path, text).expect("write temp script");
        TempScript(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for TempScript {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn nonprime_characteristic_is_a_usage_error() {
    let out = charp(&["repro", "--claim", "T", "--p", "4"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("4 is not prime"), "{}", stderr(&out));
}

#[test]
fn unknown_claim_is_a_usage_error() {
    let out = charp(&["repro", "--claim", "T9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("unknown claim"), "{}", stderr(&out));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = charp(&[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_zero() {
    let out = charp(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("repro"));
}

#[test]
fn json_output_is_identical_across_thread_counts() {
    let a = charp(&["repro", "--claim", "Bn", "--json", "--threads", "1"]);
    let b = charp(&["repro", "--claim", "Bn", "--json", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout, "canonical bytes depend on --threads");

    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).expect("canonical JSON");
    assert_eq!(doc["schemaVersion"], "1");
    assert!(
        doc.get("perf").is_none(),
        "timings leaked into canonical output"
    );
    let ids: Vec<&str> = doc["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["claimId"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["B2", "B3", "B4"]);
}

#[test]
fn repeated_runs_serialize_identically() {
    let a = charp(&["repro", "--claim", "splits5", "--json"]);
    let b = charp(&["repro", "--claim", "splits5", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_keeps_timings_stdout_stays_canonical() {
    let path = std::env::temp_dir().join(format!("charp-out-{}.json", std::process::id()));
    let out = charp(&[
        "repro",
        "--claim",
        "splits6",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(!stdout(&out).contains("\"perf\""));
    let written = std::fs::read_to_string(&path).expect("out file");
    let _ = std::fs::remove_file(&path);
    assert!(
        written.contains("\"perf\""),
        "timings missing from the written document"
    );
    assert!(written.ends_with('\n'));
    let doc: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["claims"][0]["claimId"], "splits6");
}

#[test]
fn expected_failure_rows_verify_at_p2() {
    let out = charp(&["repro", "--claim", "known-fpurity", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("claim known-fpurity: verified"), "{text}");
    assert!(
        text.contains("offdiag ideal, n = 4, p = 2: Fedder product vanishes"),
        "{text}"
    );
}

#[test]
fn passing_script_exits_zero() {
    let s = TempScript::new(
        "pass",
        "ring p = 3 vars x y\ncheck fpure [x]\ncheck member x*y in [x]\n",
    );
    let out = charp(&["check", "--script", s.path()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{} {}",
        stdout(&out),
        stderr(&out)
    );
    assert!(stdout(&out).contains("verified"));
}

#[test]
fn failing_check_exits_one() {
    let s = TempScript::new(
        "fail",
        "ring p = 2 vars x y\npoly f = x + y\ncheck dim0 [f]\n",
    );
    let out = charp(&["check", "--script", s.path()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"), "{}", stdout(&out));
}

#[test]
fn script_parse_error_exits_three_with_position() {
    let s = TempScript::new("parse", "poly = x\n");
    let out = charp(&["check", "--script", s.path()]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("line 1, column 1"), "{err}");
}

// The off-diagonal Fedder product at n = 3, p = 3 survives under the full
// budget but starves a tiny one, giving both sides of the exit-code split.
fn offdiag3_script(name: &str) -> TempScript {
    let vars: Vec<String> = ["x", "y"]
        .iter()
        .flat_map(|p| (1..=3).flat_map(move |i| (1..=3).map(move |j| format!("{p}{i}{j}"))))
        .collect();
    TempScript::new(
        name,
        &format!(
            "ring p = 3 vars {}\nideal I = offdiag_ideal(3)\ncheck fpure I\n",
            vars.join(" ")
        ),
    )
}

#[test]
fn starved_budget_exits_two() {
    let s = offdiag3_script("starve");
    let out = charp(&["check", "--script", s.path(), "--budget", "5"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{} {}",
        stdout(&out),
        stderr(&out)
    );
    assert!(stdout(&out).contains("inconclusive"), "{}", stdout(&out));
}

#[test]
fn budget_env_variable_is_the_default() {
    let s = offdiag3_script("starve-env");
    let out = Command::new(env!("CARGO_BIN_EXE_charp"))
        .args(["check", "--script", s.path()])
        .env("CHARP_BUDGET", "5")
        .output()
        .expect("spawn charp");
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));

    // An explicit flag overrides the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_charp"))
        .args(["check", "--script", s.path(), "--budget", "4000000"])
        .env("CHARP_BUDGET", "5")
        .output()
        .expect("spawn charp");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn gb_dim_and_jac_queries() {
    let s = TempScript::new(
        "query",
        "ring p = 3 vars x y\npoly f = x^2 - y\nideal I = [f]\n",
    );
    let out = charp(&["gb", "--script", s.path(), "--ideal", "I"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("x^2"), "{}", stdout(&out));

    let out = charp(&["dim", "--script", s.path(), "--ideal", "I", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["krullDimension"], 1);
    assert_eq!(doc["zeroDimensional"], false);

    let out = charp(&[
        "jac",
        "--script",
        s.path(),
        "--polys",
        "f",
        "--vars",
        "x",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["matrix"][0][0], "2*x");
    assert_eq!(doc["determinant"], "2*x");

    let out = charp(&["gb", "--script", s.path(), "--ideal", "J"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("no ideal named \"J\""),
        "{}",
        stderr(&out)
    );
}

#[test]
fn selfcheck_reports_all_suites() {
    let out = charp(&["selfcheck", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("property suites (seed 7)"), "{text}");
    assert_eq!(text.matches("0 failures").count(), 7, "{text}");
}
