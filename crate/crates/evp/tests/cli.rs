// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end tests of the `evp` binary: output shapes, exit codes, and
//! robustness against malformed input.

use std::io::Write;
use std::process::{Command, Stdio};

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn evp(args: &[&str]) -> Run {
    evp_with_stdin(args, None)
}

fn evp_with_stdin(args: &[&str], stdin: Option<&str>) -> Run {
    let mut command = Command::new(env!("CARGO_BIN_EXE_evp"));
    command.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    command.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = command.spawn().expect("spawn evp");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .expect("stdin piped")
            .write_all(text.as_bytes())
            .expect("write stdin");
    }
    let output = child.wait_with_output().expect("wait for evp");
    Run {
        stdout: String::from_utf8(output.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf8 stderr"),
        code: output.status.code().expect("exit code"),
    }
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn first_line(run: &Run) -> &str {
    run.stdout.lines().next().unwrap_or("")
}

#[test]
fn query_berries_alg1() {
    let run = evp(&["query", &fixture("berries.evp"), "berries", "Edible", "--alg", "alg1"]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert_eq!(first_line(&run), "[0.3, 0.9]");
    assert!(run.stdout.contains("status: resolved"));
}

#[test]
fn query_berries_alg2_and_selection() {
    for alg in ["alg2", "alg2prime"] {
        let run = evp(&["query", &fixture("berries.evp"), "berries", "Edible", "--alg", alg]);
        assert_eq!(run.code, 0);
        assert_eq!(first_line(&run), "[0.35, 0.75]", "algorithm {alg}");
    }
}

#[test]
fn query_unknown_object_reports_no_evidence() {
    let run = evp(&["query", &fixture("berries.evp"), "ghost", "Edible"]);
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "[0, 1]");
    assert!(run.stdout.contains("status: no_evidence"));
}

#[test]
fn query_missing_file_exits_2() {
    let run = evp(&["query", "/nonexistent/kb.evp", "a", "b"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("cannot read"));
}

#[test]
fn query_dominance_fixture() {
    let run = evp(&["query", &fixture("dominance.evp"), "item", "Edible", "--alg", "alg1"]);
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "[0.7, 0.9]");
    assert!(run.stdout.contains("status: nesting"));
    assert!(run.stdout.contains("dropped_by_dominance: SoftBerries"));
}

#[test]
fn resolve_chained_set() {
    let set = "[0.3,0.4] [0.0,0.5] [0.4,0.7] [0.4,1.0]";
    let run = evp(&["resolve", set, "--alg", "alg2"]);
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "[0.3, 0.7]");
    let run = evp(&["resolve", set, "--alg", "alg1"]);
    assert_eq!(first_line(&run), "[0, 1]");
}

#[test]
fn resolve_singleton_point() {
    let run = evp(&["resolve", "[0.5,0.5]"]);
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "[0.5, 0.5]");
}

#[test]
fn resolve_empty_list_exits_3() {
    for arg in ["", "   "] {
        let run = evp(&["resolve", arg]);
        assert_eq!(run.code, 3);
        assert!(run.stderr.contains("no candidates"));
    }
}

#[test]
fn resolve_reads_stdin() {
    let run = evp_with_stdin(&["resolve", "-", "--alg", "alg2prime"], Some("[0.3,0.4]\n[0.2,0.9]\n"));
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "[0.3, 0.4]");
}

#[test]
fn resolve_bad_literal_exits_2() {
    let run = evp(&["resolve", "[0.3,0.4] wat"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("expected interval"));
}

#[test]
fn resolve_trace_shows_first_pass_covers() {
    let run = evp(&["resolve", "[0.3,0.4] [0.0,0.5] [0.4,0.7] [0.4,1.0]", "--alg", "alg1", "--trace"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("pass 1:"));
    assert!(run
        .stdout
        .contains("generated: [0, 0.7] [0, 1] [0.3, 0.7] [0.3, 1]"));
}

#[test]
fn check_valid_file_lists_candidates() {
    let run = evp(&["check", &fixture("berries.evp")]);
    assert_eq!(run.code, 0);
    assert_eq!(first_line(&run), "OK, 4 candidates for (berries, Edible)");
    assert!(run.stdout.contains("  RedBerries [0.7, 0.9]"));
}

#[test]
fn check_cycle_exits_2_naming_the_cycle() {
    let run = evp(&["check", &fixture("cycle.evp")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("subset cycle involving RedBerries, SoftBerries"));
}

#[test]
fn check_reversed_interval_exits_2() {
    let run = evp(&["check", &fixture("bad_interval.evp")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("lower exceeds upper"));
}

#[test]
fn unknown_algorithm_is_a_usage_error() {
    let run = evp(&["resolve", "[0.2,0.4]", "--alg", "alg9"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("alg9"));
}

#[test]
fn json_records_have_every_field() {
    let run = evp(&[
        "query", &fixture("berries.evp"), "berries", "Edible", "--alg", "alg2", "--format", "json",
    ]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().count(), 1);
    let record: serde_json::Value = serde_json::from_str(run.stdout.trim()).expect("valid json");
    for field in [
        "query",
        "algorithm",
        "interval",
        "status",
        "reference_classes",
        "dropped_by_dominance",
        "constituents",
        "trace",
    ] {
        assert!(record.get(field).is_some(), "missing field {field}");
    }
    assert_eq!(record["interval"], "[0.35, 0.75]");
    assert_eq!(record["query"]["object"], "berries");

    // Text mode reports the same interval.
    let text = evp(&["query", &fixture("berries.evp"), "berries", "Edible", "--alg", "alg2"]);
    assert_eq!(text.stdout.lines().next().unwrap(), record["interval"].as_str().unwrap());
}

#[test]
fn json_trace_round_trips() {
    let run = evp(&["resolve", "[0.3,0.4] [0.4,0.7]", "--alg", "alg2", "--trace", "--format", "json"]);
    let record: serde_json::Value = serde_json::from_str(run.stdout.trim()).expect("valid json");
    assert!(record["trace"].is_array());
    assert_eq!(record["trace"][0]["iteration"], 1);
    assert_eq!(record["trace"][0]["generated"][0]["interval"], "[0.3, 0.7]");
}

#[test]
fn malformed_input_never_panics() {
    let junk: &[&str] = &[
        "[", "]", "[,]", "[1/0, 1]", "[0.1234567891, 0.9]", "[-1, 0.5]", "[0.5, 2]", "[[0.1,0.2]]",
        "\u{1F600} [0.1,0.2]", "[0.1 0.2]",
    ];
    for arg in junk {
        let run = evp(&["resolve", arg]);
        assert_eq!(run.code, 2, "arg {arg:?} gave stdout {:?}", run.stdout);
        assert!(!run.stderr.contains("panicked"), "panic on {arg:?}");
    }
    let kb_junk = "member\nstat T S [0.2, 0.1]\nsubset A A\n\u{0007}weird ☃\n";
    let dir = std::env::temp_dir().join("evp-junk-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("junk.evp");
    std::fs::write(&path, kb_junk).unwrap();
    let run = evp(&["check", path.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(!run.stderr.contains("panicked"));
}

#[test]
fn duplicate_statements_warn_but_pass_check() {
    let dir = std::env::temp_dir().join("evp-dup-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dup.evp");
    std::fs::write(&path, "member o A\nmember o A\nstat T A [0.1, 0.2]\nquery o T\n").unwrap();
    let run = evp(&["check", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stderr.contains("duplicate statement"));
    assert!(run.stdout.contains("OK, 1 candidates for (o, T)"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(evp(&["--help"]).code, 0);
    assert_eq!(evp(&["--version"]).code, 0);
    assert_eq!(evp(&[]).code, 2);
}
