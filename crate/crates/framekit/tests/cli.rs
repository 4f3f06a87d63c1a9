use std::path::PathBuf;
use std::process::{Command, Output};

fn framekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framekit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Writes `body` to a per-test temp file.
fn temp(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("framekit-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn mercedes_bounds_are_tight() {
    let o = framekit(&["hframe", "bounds", "--named", "mercedes"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1.5, 1.5) tight"), "{}", stdout(&o));
}

#[test]
fn frame_file_round_trip() {
    let f = temp("basis.json", r#"{"dim": 2, "vectors": {"rows": 2, "cols": 3, "re": [[1, 0, 1], [0, 1, 0]]}}"#);
    let o = framekit(&["hframe", "bounds", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("frame"));
}

#[test]
fn empty_family_is_an_input_error() {
    let f = temp("empty.json", r#"{"dim": 2, "vectors": {"rows": 2, "cols": 0, "re": []}}"#);
    let o = framekit(&["hframe", "bounds", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn malformed_json_reports_position() {
    let f = temp("bad.json", "{\n  \"dim\": 2,\n  \"vectors\": [1, 2\n");
    let o = framekit(&["hframe", "bounds", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let o = framekit(&["hframe", "bounds", "--in", "/nonexistent/frame.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let o = framekit(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn rational_flag_is_limited_to_vsdilate() {
    let o = framekit(&["--rational", "hframe", "bounds", "--named", "mercedes"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shift_dilation_prints_the_table() {
    let o = framekit(&["pasf", "dilate", "--shift", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for n in 1..=8 {
        assert!(out.contains(&format!("w{n} = ")), "{out}");
    }
}

#[test]
fn json_output_is_reproducible() {
    let f = temp("sip.json", r#"{"p": 3, "omega": {"rows": 2, "cols": 3, "re": [[1, 0, 1], [0, 1, 1]]},
                                 "tau": {"rows": 2, "cols": 3, "re": [[1, 0, 0], [0, 1, 0]]}}"#);
    let args = ["--json", "--seed", "7", "sip", "identity", "--in", f.to_str().unwrap(), "--samples", "8"];
    let a = framekit(&args);
    let b = framekit(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("valid JSON");
    assert_eq!(v["seed"], 7);
}

#[test]
fn exact_dilation_breaks_past_its_horizon() {
    let t = temp("t.json", "[[2]]");
    let o = framekit(&["--rational", "vsdilate", "ndilate", "--t", t.to_str().unwrap(), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("[[\"5\"]]") && out.contains("[[\"4\"]]"), "{out}");
}

#[test]
fn non_invertible_frame_exits_one() {
    let f = temp("zero.json", r#"{"dim": 2, "vectors": {"rows": 2, "cols": 2, "re": [[1, 1], [0, 0]]}}"#);
    let o = framekit(&["hframe", "dual", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn obstruction_holds_on_samples() {
    let o = framekit(&["cuntz", "obstruction", "--dim", "3", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
}
