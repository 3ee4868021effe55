use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use ryserlab::{classify, parse_design, DesignClass};

fn ryserlab(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ryserlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_pipes_into_classify() {
    let fano = ryserlab(&["catalog", "--name", "fano"], "");
    assert!(fano.status.success());
    let class = ryserlab(&["classify"], &stdout(&fano));
    assert_eq!(class.status.code(), Some(0));
    assert_eq!(stdout(&class), "Symmetric v=7 k=3 lambda=1\n");
}

#[test]
fn complement_from_file_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.txt");
    fs::write(&path, stdout(&ryserlab(&["catalog", "--name", "fano"], ""))).unwrap();
    let comp = ryserlab(&["complement", path.to_str().unwrap(), "--block", "0"], "");
    assert!(comp.status.success());
    let verify = ryserlab(&["verify"], &stdout(&comp));
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).ends_with("OVERALL PASS\n"));

    let inv = ryserlab(&["invariants"], &stdout(&comp));
    let text = stdout(&inv);
    for line in ["v=7", "lambda=2", "r1=5", "r2=3", "e1=3", "e2=4"] {
        assert!(text.lines().any(|l| l == line), "{line} missing from\n{text}");
    }
    assert!(text.lines().all(|l| l.contains('=')));
}

#[test]
fn flipped_bit_fails_verify() {
    let comp = stdout(&ryserlab(&["complement", "--block", "0"], &stdout(&ryserlab(&["catalog", "--name", "biplane11"], ""))));
    let mut lines: Vec<String> = comp.lines().map(String::from).collect();
    let row = &mut lines[3];
    let flipped = if row.starts_with('0') { "1" } else { "0" };
    row.replace_range(0..1, flipped);
    let broken = lines.join("\n") + "\n";
    let verify = ryserlab(&["verify"], &broken);
    assert_eq!(verify.status.code(), Some(1));
    assert!(stdout(&verify).ends_with("OVERALL FAIL\n"));
}

#[test]
fn malformed_input_reports_position() {
    let out = ryserlab(&["classify"], "RYSERLAB v=3 b=3\n110\n0110\n101\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    let missing = ryserlab(&["verify", "/nonexistent/design.txt"], "");
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn witness_lookup() {
    // a symmetric input has no replication classes
    let fano = stdout(&ryserlab(&["catalog", "--name", "fano"], ""));
    assert_eq!(ryserlab(&["complement", "--witness"], &fano).status.code(), Some(2));
    let comp = stdout(&ryserlab(&["complement", "--block", "3"], &fano));
    let wit = ryserlab(&["complement", "--witness"], &comp);
    assert_eq!(wit.status.code(), Some(0));
    assert!(stdout(&wit).starts_with("witness block=3 "));
}

#[test]
fn scan_tsv() {
    let out = ryserlab(&["scan", "--lambda-min", "2", "--lambda-max", "4"], "");
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("lambda\tv\tr1\tr2\tg\tc\td\ta\te1\te2\tD\tx\ty\tverdict\trule\n"));
    assert!(text.lines().filter(|l| !l.starts_with('#')).skip(1).all(|l| l.split('\t').count() == 15));
    assert_eq!(ryserlab(&["scan", "--lambda-min", "1", "--lambda-max", "4"], "").status.code(), Some(2));
}

#[test]
fn search_writes_designs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sols");
    let out = ryserlab(&["search", "--lambda", "3", "--v", "13", "--out", out_dir.to_str().unwrap()], "");
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("overall\tCOMPLETE\n"));
    let manifest = fs::read_to_string(out_dir.join("manifest.tsv")).unwrap();
    let rows: Vec<&str> = manifest.lines().skip(1).collect();
    assert!(!rows.is_empty());
    for row in rows {
        let file = row.split('\t').next().unwrap();
        let s = parse_design(&fs::read_to_string(out_dir.join(file)).unwrap()).unwrap();
        assert_eq!(classify(&s), DesignClass::Ryser { v: 13, lambda: 3 });
        assert_eq!(row.split('\t').nth(6), Some("true"));
    }
}

#[test]
fn search_budget_reports_incomplete() {
    let out = ryserlab(&["search", "--lambda", "3", "--v", "13", "--node-budget", "5"], "");
    assert!(stdout(&out).contains("status\tINCOMPLETE"));
    assert!(stdout(&out).ends_with("overall\tINCOMPLETE\n"));
}

#[test]
fn version_and_usage() {
    let v = ryserlab(&["--version"], "");
    assert!(v.status.success());
    assert!(stdout(&v).starts_with("ryserlab 0."));
    assert_eq!(ryserlab(&[], "").status.code(), Some(2));
    assert_eq!(ryserlab(&["complement"], "").status.code(), Some(2));
}
