//! End-to-end tests of the `checkless` binary: argument handling, output
//! shape, and the exit-code contract (0 success, 1 input error, 2
//! verification witness, 3 difference-test mismatch, 4 table integrity —
//! the last two are unreachable for a healthy build, so only their happy
//! paths run here).

use std::io::Write;
use std::process::{Command, Output};

fn checkless(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checkless"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn parse_shows_scan_and_both_encodings() {
    let out = checkless(&["parse", "-3.14e12"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("sign - w 314 q 10"), "got: {text}");
    assert!(text.contains("0xC286D8B4AD400000"), "got: {text}");
    assert!(text.contains("0xD436C5A5"), "got: {text}");
    assert!(text.contains("guard: binary64 quiet, binary32 quiet"), "got: {text}");
}

#[test]
fn parse_renders_seventeen_digits_and_infinity() {
    let out = checkless(&["parse", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1.0000000000000001e-1"));

    let out = checkless(&["parse", "1e309"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0x7FF0000000000000 = inf"), "got: {text}");
    assert!(text.contains("0x7F800000 = inf"), "got: {text}");
}

#[test]
fn parse_reports_truncation() {
    let out = checkless(&["parse", "4503599627370496.5000000000000000000000001"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("truncated from 41 significant digits"),
        "got: {text}"
    );
    // The dropped tail forces rounding up where the 19-digit prefix alone
    // would tie to even (down).
    assert!(text.contains("0x4330000000000001"), "got: {text}");
}

#[test]
fn parse_rejects_garbage_with_a_byte_offset() {
    let out = checkless(&["parse", "abc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("expected a digit at byte 0"));

    let out = checkless(&["parse", "1.5x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("byte 3"), "got: {}", stderr(&out));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = checkless(&["parse"]);
    assert_eq!(out.status.code(), Some(1));

    let out = checkless(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("difference-test"));

    let out = checkless(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_text_and_json_agree_on_all_clear() {
    let out = checkless(&["verify", "--target", "f64"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all clear"), "got: {text}");
    assert!(text.contains("651"), "entry count missing: {text}");

    let out = checkless(&["verify", "--target", "both", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    for key in ["binary64", "binary32"] {
        let report = &value[key];
        assert_eq!(report["all_clear"], serde_json::Value::Bool(true), "{key}");
        assert_eq!(report["checks"].as_array().map(Vec::len), Some(651), "{key}");
        assert!(report["table_sha256"].as_str().is_some_and(|s| s.len() == 64));
    }
    assert_eq!(value["binary64"]["k"], 137);
    assert_eq!(value["binary32"]["k"], 166);
}

#[test]
fn difftest_runs_clean_and_reports_counts() {
    let out = checkless(&["difftest", "--count", "3000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("inputs examined:     3000"), "got: {text}");
    assert!(text.contains("mismatches:          0"), "got: {text}");
    assert!(text.contains("guard firings:       0"), "got: {text}");
}

#[test]
fn difftest_accepts_a_corpus_file() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "0.1\n\n1e23\n-4503599627370496.5").expect("write corpus");
    let path = file.path().to_str().expect("utf-8 path");

    let out = checkless(&["difftest", "--corpus", path]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("inputs examined:     3"));

    let out = checkless(&["difftest", "--corpus", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dump_table_prints_endpoints_and_checksum() {
    let out = checkless(&["dump-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 651);
    assert_eq!(lines[0], "-342\tEEF453D6923BD65A113FAA2906A13B40");
    assert_eq!(lines[342], "0\t80000000000000000000000000000000");
    assert_eq!(lines[650], "308\t8E679C2F5E44FF8F570F09EAA7EA7648");
    assert!(stderr(&out).contains("sha256: "));

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("table.tsv");
    let out = checkless(&["dump-table", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).expect("dump written");
    assert_eq!(written, text);
}

#[cfg(unix)]
#[test]
fn an_early_closed_pipe_is_not_an_error() {
    // `checkless verify --json | head` must behave like any line-oriented
    // tool: no broken-pipe panic splattered on stderr. The JSON report is
    // well past a pipe buffer, so the writer is still writing when `head`
    // walks away.
    let out = Command::new("sh")
        .arg("-c")
        .arg(format!(
            "{} verify --target f64 --json | head -n 3",
            env!("CARGO_BIN_EXE_checkless")
        ))
        .output()
        .expect("shell runs");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("binary64"), "got: {text}");
    assert!(!stderr(&out).contains("panicked"), "got: {}", stderr(&out));
}

#[test]
fn bench_times_variants_over_a_dataset() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    for i in 0..300u64 {
        writeln!(file, "{}", checkless_cli::corpus::generate(5, i)).expect("write line");
    }
    let path = file.path().to_str().expect("utf-8 path");

    let out = checkless(&["bench", path, "--reps", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("no_check"), "got: {text}");
    assert!(text.contains("with_check"), "got: {text}");
    assert!(text.contains("floor"), "got: {text}");
    assert!(text.contains("no_check throughput vs with_check"), "got: {text}");

    // Fewer than 3 reps cannot produce a median.
    let out = checkless(&["bench", path, "--reps", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("at least 3"));

    let out = checkless(&["bench", "/no/such/dataset"]);
    assert_eq!(out.status.code(), Some(1));
}
