//! End-to-end checks of the `wmwg` binary through files, stdout and exit codes only.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn wmwg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmwg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const I3: &str = r#"{"rows": 3, "cols": 3, "data": [[1,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]}"#;

#[test]
fn fixture_wmwg_leading_entry() {
    let out = wmwg(&["compute", "--fixture", "ex41", "--m", "1", "--method", "wmwg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let first = stdout(&out).split_whitespace().next().unwrap().to_string();
    assert_eq!(first, "-0.015936-0.019648i");
}

#[test]
fn pinv_of_identity() {
    let dir = TempDir::new().unwrap();
    let i3 = write(&dir, "i3.json", I3);
    let out_path = dir.path().join("x.json");
    let out = wmwg(&["compute", "--matrix", s(&i3), "--method", "pinv", "--out", s(&out_path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "1  0  0\n0  1  0\n0  0  1\n");
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.contains(r#""rows":3"#));
    assert!(written.contains("[1.0,0.0]"));
}

#[test]
fn core_k_at_m_equal_k_is_inapplicable() {
    let out = wmwg(&["compute", "--fixture", "ex41", "--m", "3", "--method", "wmwg:CoreK"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("k >= m+1"), "{}", stderr(&out));
}

#[test]
fn group_inverse_at_index_two_does_not_exist() {
    let dir = TempDir::new().unwrap();
    let n = write(&dir, "n.json", r#"{"rows": 2, "cols": 2, "data": [[0,0],[1,0],[0,0],[0,0]]}"#);
    assert_eq!(code(&wmwg(&["compute", "--matrix", s(&n), "--method", "group"])), 3);
    assert_eq!(code(&wmwg(&["compute", "--matrix", s(&n), "--method", "core"])), 3);
    assert_eq!(code(&wmwg(&["compute", "--seed", "5", "--method", "w-group"])), 3);
    assert_eq!(code(&wmwg(&["compute", "--matrix", s(&n), "--method", "drazin"])), 0);
}

#[test]
fn weighted_methods_need_a_weight() {
    let dir = TempDir::new().unwrap();
    let i3 = write(&dir, "i3.json", I3);
    assert_eq!(code(&wmwg(&["compute", "--matrix", s(&i3), "--method", "w-drazin"])), 2);
    assert_eq!(code(&wmwg(&["compute", "--fixture", "ex41", "--method", "wmwg"])), 2);
    assert_eq!(code(&wmwg(&["compute", "--fixture", "ex41", "--method", "nope"])), 2);
    assert_eq!(code(&wmwg(&["compute", "--fixture", "ex99", "--method", "w-drazin"])), 2);
}

#[test]
fn weight_from_file_matches_fixture() {
    let dir = TempDir::new().unwrap();
    let (a, w) = (dir.path().join("a.json"), dir.path().join("w.json"));
    assert_eq!(code(&wmwg(&["fixture", "ex41", "--out-a", s(&a), "--out-w", s(&w)])), 0);
    let from_files = wmwg(&["compute", "--matrix", s(&a), "--weight", s(&w), "--m", "2", "--method", "wmwg"]);
    let from_fixture = wmwg(&["compute", "--fixture", "ex41", "--m", "2", "--method", "wmwg"]);
    assert_eq!(code(&from_files), 0);
    assert_eq!(stdout(&from_files), stdout(&from_fixture));
}

#[test]
fn fixture_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let (a, w) = (dir.path().join("a.json"), dir.path().join("w.json"));
    assert_eq!(code(&wmwg(&["fixture", "ex41", "--out-a", s(&a), "--out-w", s(&w)])), 0);
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.starts_with(r#"{"rows":6,"cols":5,"data":[[1.0,1.0],[1.0,0.0],[1.0,0.0],[0.0,0.0]"#), "{text}");

    // Exports are byte-identical across runs.
    let (a2, w2) = (dir.path().join("a2.json"), dir.path().join("w2.json"));
    assert_eq!(code(&wmwg(&["fixture", "ex41", "--out-a", s(&a2), "--out-w", s(&w2)])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&a2).unwrap());
    assert_eq!(fs::read(&w).unwrap(), fs::read(&w2).unwrap());
}

#[test]
fn table_reproduces_grid() {
    let out = wmwg(&["table", "--fixture", "ex41", "--m", "1,2,3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,m,frobenius_error"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 39);
    let na: Vec<_> = rows.iter().filter(|r| r[2] == "NA").collect();
    assert_eq!(na.len(), 1);
    assert_eq!((na[0][0], na[0][1]), ("CoreK", "3"));
    for r in rows.iter().filter(|r| r[2] != "NA") {
        let v: f64 = r[2].parse().unwrap();
        assert!(v < 1e-10, "{r:?}");
    }
    assert!(!text.contains('\r'));
}

#[test]
fn table_extension_row_and_json() {
    let out = wmwg(&["table", "--fixture", "ex41", "--m", "2", "--pinv-at-k", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("\"PinvPower(3)\""));
    assert!(text.contains("\"PinvPower(6)\""));
}

#[test]
fn identity_pair_table_is_tight() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"rows": 2, "cols": 2, "data": [[2,0],[1,1],[0,0],[3,-1]]}"#);
    let i2 = write(&dir, "i2.json", r#"{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}"#);
    let out = wmwg(&["table", "--matrix", s(&a), "--weight", s(&i2), "--m", "1,2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for line in stdout(&out).lines().skip(1) {
        let cell = line.rsplit(',').next().unwrap();
        if cell != "NA" {
            assert!(cell.parse::<f64>().unwrap() < 1e-12, "{line}");
        }
    }
}

#[test]
fn seeded_table_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    for path in [&x, &y] {
        let out = wmwg(&["table", "--seed", "17", "--rows", "5", "--cols", "4", "--index", "3", "--out", s(path)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(fs::read(&x).unwrap(), fs::read(&y).unwrap());
}

#[test]
fn verify_exit_codes() {
    let ok = wmwg(&["verify", "--fixture", "ex41", "--m", "2", "--tol", "1e-10"]);
    assert_eq!(code(&ok), 0, "{}{}", stdout(&ok), stderr(&ok));
    assert!(stdout(&ok).contains("projector_shift"));
    let strict = wmwg(&["verify", "--fixture", "ex41", "--m", "2", "--tol", "1e-20"]);
    assert_eq!(code(&strict), 1);
    assert!(stderr(&strict).contains("penrose"));
}

#[test]
fn zero_weight_is_rejected() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"rows": 1, "cols": 2, "data": [[1,0],[2,0]]}"#);
    let zero = write(&dir, "zero.json", r#"{"rows": 2, "cols": 1, "data": [[0,0],[0,0]]}"#);
    let out = wmwg(&["verify", "--matrix", s(&a), "--weight", s(&zero), "--m", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nonzero"), "{}", stderr(&out));
}

#[test]
fn matrix_file_errors() {
    let dir = TempDir::new().unwrap();
    let shape = write(&dir, "shape.json", r#"{"rows": 2, "cols": 3, "data": [[1,0],[0,0],[0,0],[0,0],[1,0]]}"#);
    let bad = write(&dir, "bad.json", r#"{"rows": 1, "cols": 1, "data": [[1, "x"]]}"#);
    let missing = dir.path().join("missing.json");
    let shape_out = wmwg(&["compute", "--matrix", s(&shape), "--method", "pinv"]);
    let bad_out = wmwg(&["compute", "--matrix", s(&bad), "--method", "pinv"]);
    let missing_out = wmwg(&["compute", "--matrix", s(&missing), "--method", "pinv"]);
    for out in [&shape_out, &bad_out, &missing_out] {
        assert_eq!(code(out), 4, "{}", stderr(out));
    }
    let messages = [stderr(&shape_out), stderr(&bad_out), stderr(&missing_out)];
    assert!(messages[0].contains("does not match shape"));
    assert!(messages[1].contains("malformed JSON"));
    assert!(messages[2].contains("cannot read"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&wmwg(&[])), 2);
    assert_eq!(code(&wmwg(&["compute", "--method", "pinv"])), 2);
    assert_eq!(code(&wmwg(&["table", "--fixture", "ex41", "--m", "0"])), 2);
}
